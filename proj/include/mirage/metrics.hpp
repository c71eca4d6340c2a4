#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mirage/ledger.hpp"
#include "mirage/script.hpp"

namespace mirage {

// ------------------------------------------------------------ trust indices

/// TII: share of accumulated trust in all observations of `subject`,
/// Σ P_T / (Σ P_S + Σ P_T) over observers != subject.
/// Throws NoObservations when the denominator is zero.
double tii(const SuspicionTrustLedger& ledger, const std::string& subject);

/// FII: the suspicion complement, Σ P_S / (Σ P_S + Σ P_T). FII + TII = 1
/// whenever either is defined.
double fii(const SuspicionTrustLedger& ledger, const std::string& subject);

// ----------------------------------------------------------------------- CIC

enum class CicScope { Character, Game };

/// Fraction of investigable clues actually revealed: CN / CA, restricted to
/// key clues when key_only. Character scope reads one character's set; game
/// scope the union. Throws NoCluesDefined when the clue class is empty.
double cic(const std::map<std::string, std::set<std::string>>& revealed_by, const Script& script,
           CicScope scope, bool key_only, const std::string& character = {});

// ------------------------------------------------------------------- Rouge-L

struct RougeScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

/// LCS-based Rouge-L over already-tokenized sequences.
RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference);

// ----------------------------------------------------------------- SCI / ICI

struct AbilityScores {
  int reasoning = 0;      // Reasoning and Analysis
  int communication = 0;  // Communication and Cooperation
  int observation = 0;    // Observation
  int innovation = 0;     // Thinking Innovation
  int role_play = 0;      // Role-Playing (feeds SCI, not ICI)
};

/// Equal-weight blend of normalized role-play and mean reconstruction F1,
/// scaled to [0,100]. Throws EmptyReconstruction on an empty F1 list.
double sci(int role_play, const std::vector<double>& rouge_f1_per_part);

/// Mean of the four non-role-play abilities scaled to [0,100].
double ici(const AbilityScores& scores);

// ------------------------------------------------------------------- ranking

/// Reciprocal rank of the best-ranked culprit (1-based). Throws
/// CulpritNotRanked when no culprit appears in the ranking.
double victory_mrr(const std::vector<std::string>& ranking,
                   const std::set<std::string>& culprit_ids);

double mean(const std::vector<double>& values);

/// Kendall tau-a between two permutations of the same item set;
/// (C - D) / (n(n-1)/2), n >= 2, computed by inversion counting.
/// Throws ItemSetMismatch when the rankings disagree on membership.
double kendall_tau(const std::vector<std::string>& rank_a, const std::vector<std::string>& rank_b);

}  // namespace mirage
