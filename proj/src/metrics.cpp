#include "mirage/metrics.hpp"

#include <algorithm>
#include <unordered_map>

#include "mirage/error.hpp"

namespace mirage {

namespace {

struct LedgerSums {
  long sus = 0;
  long trust = 0;
};

LedgerSums sums_for(const SuspicionTrustLedger& ledger, const std::string& subject) {
  LedgerSums sums;
  for (const auto& [key, cell] : ledger.cells()) {
    if (key.second != subject) continue;
    sums.sus += cell.sus_total;
    sums.trust += cell.trust_total;
  }
  return sums;
}

}  // namespace

double tii(const SuspicionTrustLedger& ledger, const std::string& subject) {
  const LedgerSums sums = sums_for(ledger, subject);
  if (sums.sus + sums.trust == 0)
    fail(ErrorCode::NoObservations, "no suspicion/trust samples for '" + subject + "'");
  return static_cast<double>(sums.trust) / static_cast<double>(sums.sus + sums.trust);
}

double fii(const SuspicionTrustLedger& ledger, const std::string& subject) {
  const LedgerSums sums = sums_for(ledger, subject);
  if (sums.sus + sums.trust == 0)
    fail(ErrorCode::NoObservations, "no suspicion/trust samples for '" + subject + "'");
  return static_cast<double>(sums.sus) / static_cast<double>(sums.sus + sums.trust);
}

double cic(const std::map<std::string, std::set<std::string>>& revealed_by, const Script& script,
           CicScope scope, bool key_only, const std::string& character) {
  std::set<std::string> clue_class;
  for (const auto& clue : script.clues)
    if (!key_only || clue.is_key) clue_class.insert(clue.id);
  if (clue_class.empty())
    fail(ErrorCode::NoCluesDefined,
         key_only ? "script defines no key clues" : "script defines no clues");

  std::set<std::string> revealed;
  if (scope == CicScope::Character) {
    const auto it = revealed_by.find(character);
    if (it != revealed_by.end()) revealed = it->second;
  } else {
    for (const auto& [who, ids] : revealed_by) revealed.insert(ids.begin(), ids.end());
  }

  size_t numerator = 0;
  for (const auto& id : revealed)
    if (clue_class.count(id)) ++numerator;
  return static_cast<double>(numerator) / static_cast<double>(clue_class.size());
}

RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference) {
  const size_t n = candidate.size();
  const size_t m = reference.size();
  RougeScore score;
  if (n == 0 || m == 0) return score;

  // two-row LCS
  std::vector<size_t> prev(m + 1, 0);
  std::vector<size_t> curr(m + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      if (candidate[i - 1] == reference[j - 1])
        curr[j] = prev[j - 1] + 1;
      else
        curr[j] = std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  const auto lcs = static_cast<double>(prev[m]);

  score.precision = lcs / static_cast<double>(n);
  score.recall = lcs / static_cast<double>(m);
  if (score.precision + score.recall > 0)
    score.f1 = 2 * score.precision * score.recall / (score.precision + score.recall);
  return score;
}

double sci(int role_play, const std::vector<double>& rouge_f1_per_part) {
  if (role_play < 0 || role_play > 20)
    fail(ErrorCode::InvalidLevel, "role_play " + std::to_string(role_play) + " outside [0,20]");
  if (rouge_f1_per_part.empty())
    fail(ErrorCode::EmptyReconstruction, "no reconstructed parts to score");
  return 100.0 * 0.5 * (role_play / 20.0 + mean(rouge_f1_per_part));
}

double ici(const AbilityScores& scores) {
  for (const int v : {scores.reasoning, scores.communication, scores.observation,
                      scores.innovation, scores.role_play})
    if (v < 0 || v > 20)
      fail(ErrorCode::InvalidLevel, "ability score " + std::to_string(v) + " outside [0,20]");
  const int sum = scores.reasoning + scores.communication + scores.observation + scores.innovation;
  return 100.0 * sum / 80.0;
}

double victory_mrr(const std::vector<std::string>& ranking,
                   const std::set<std::string>& culprit_ids) {
  for (size_t i = 0; i < ranking.size(); ++i)
    if (culprit_ids.count(ranking[i])) return 1.0 / static_cast<double>(i + 1);
  fail(ErrorCode::CulpritNotRanked, "no culprit in the accusation ranking");
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0;
  double sum = 0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

namespace {

// merge sort counting inversions of `a` in place
long count_inversions(std::vector<int>& a, std::vector<int>& scratch, size_t lo, size_t hi) {
  if (hi - lo < 2) return 0;
  const size_t mid = lo + (hi - lo) / 2;
  long inversions = count_inversions(a, scratch, lo, mid) + count_inversions(a, scratch, mid, hi);
  size_t i = lo;
  size_t j = mid;
  size_t k = lo;
  while (i < mid && j < hi) {
    if (a[i] <= a[j]) {
      scratch[k++] = a[i++];
    } else {
      inversions += static_cast<long>(mid - i);
      scratch[k++] = a[j++];
    }
  }
  while (i < mid) scratch[k++] = a[i++];
  while (j < hi) scratch[k++] = a[j++];
  std::copy(scratch.begin() + static_cast<long>(lo), scratch.begin() + static_cast<long>(hi),
            a.begin() + static_cast<long>(lo));
  return inversions;
}

}  // namespace

double kendall_tau(const std::vector<std::string>& rank_a, const std::vector<std::string>& rank_b) {
  const size_t n = rank_a.size();
  if (n < 2 || rank_b.size() != n)
    fail(ErrorCode::ItemSetMismatch, "rankings must share an item set of size >= 2");
  std::unordered_map<std::string, int> position_in_b;
  for (size_t i = 0; i < n; ++i)
    if (!position_in_b.emplace(rank_b[i], static_cast<int>(i)).second)
      fail(ErrorCode::ItemSetMismatch, "duplicate item '" + rank_b[i] + "'");

  std::vector<int> sequence;
  sequence.reserve(n);
  std::unordered_map<std::string, int> seen_in_a;
  for (const auto& item : rank_a) {
    const auto it = position_in_b.find(item);
    if (it == position_in_b.end())
      fail(ErrorCode::ItemSetMismatch, "item '" + item + "' missing from the second ranking");
    if (!seen_in_a.emplace(item, 1).second)
      fail(ErrorCode::ItemSetMismatch, "duplicate item '" + item + "'");
    sequence.push_back(it->second);
  }

  std::vector<int> scratch(sequence.size());
  const long discordant = count_inversions(sequence, scratch, 0, sequence.size());
  const long total = static_cast<long>(n) * static_cast<long>(n - 1) / 2;
  return static_cast<double>(total - 2 * discordant) / static_cast<double>(total);
}

}  // namespace mirage
