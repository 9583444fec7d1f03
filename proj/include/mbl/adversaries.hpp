#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mbl/engine.hpp"
#include "mbl/verify.hpp"

namespace mbl {

// Threshold-family quantile attack for label-tuple rounds: with N survivors
// sorted by threshold b_1 < ... < b_N and c = ceil(N/(r+1)), queries the r
// inputs b_{min(i*c+1,N)} - 1. Every answer class holds <= c survivors, so a
// "no" costs at most c hypotheses; continues while N >= 2.
class ThresholdMaximinAdversary : public Adversary {
 public:
  std::string name() const override { return "threshold-maximin"; }
  void begin(const GameView& view) override;
  bool round_available(const GameView& view) override;
  Query next_query(const GameView& view) override;
  Feedback feedback(const GameView& view, const Query& query,
                    const Guess& guess) override;
};

// Subround median attack: each subround queries the median threshold of the
// survivors consistent with the learner's labels so far this round, then says
// "no" to the full tuple. Per round at most ceil(T/2^r) survivors are lost.
class AmbMedianAdversary : public Adversary {
 public:
  std::string name() const override { return "amb-median"; }
  void begin(const GameView& view) override;
  bool round_available(const GameView& view) override;
  int next_amb_input(const GameView& view, const Query& partial,
                     const std::vector<int>& labels_so_far) override;
  Feedback feedback(const GameView& view, const Query& query,
                    const Guess& guess) override;
};

// Pair-query binary insertion on permutations (r = 2): introduces elements in
// input order and pins each new element's slot among the placed ones with
// midpoint queries, answering "no" every round. Forces floor(log2 m) mistakes
// for the m-th element and p(n) in total against any learner.
class OrderInsertionAdversary : public Adversary {
 public:
  std::string name() const override { return "insertion"; }
  void begin(const GameView& view) override;
  bool round_available(const GameView& view) override;
  Query next_query(const GameView& view) override;
  Feedback feedback(const GameView& view, const Query& query,
                    const Guess& guess) override;

 private:
  void advance(const GameView& view);

  std::vector<int> placed_;  // input values in increasing value order
  int pending_ = 0;          // next input value to place, 0 = none
  int lo_ = 1, hi_ = 1;      // slot window, slots 1..|placed_|+1
};

// Block-exhaustion attack for set queries: splits the ground set into
// consecutive r-blocks, answers "no" on each block until one pattern is left
// (<= r!-1 forced), then recurses on the classes of block-relative ranks.
class OrderMergeAdversary : public Adversary {
 public:
  std::string name() const override { return "merge"; }
  void begin(const GameView& view) override;
  bool round_available(const GameView& view) override;
  Query next_query(const GameView& view) override;
  Feedback feedback(const GameView& view, const Query& query,
                    const Guess& guess) override;

 private:
  void advance(const GameView& view);

  std::vector<std::vector<int>> worklist_;  // element sets awaiting blocking
  std::vector<std::vector<int>> blocks_;    // blocks of the active set
  std::size_t next_block_ = 0;
  std::vector<int> active_;  // block currently being exhausted, empty = none
};

// Pivot attack for comparison queries: compares blocks of r elements against
// the largest element, answering "no" until the 2^r outcome combinations for
// the block collapse to one, then recurses on both sides of the pivot.
// Leftover elements that fill no block are never queried again.
class ComparisonQuicksortAdversary : public Adversary {
 public:
  std::string name() const override { return "quicksort"; }
  void begin(const GameView& view) override;
  bool round_available(const GameView& view) override;
  Query next_query(const GameView& view) override;
  Feedback feedback(const GameView& view, const Query& query,
                    const Guess& guess) override;

  // One entry per finished block: how many "no"s the block absorbed.
  const std::vector<int>& block_no_counts() const { return block_counts_; }

 private:
  void advance(const GameView& view);

  std::vector<std::vector<int>> worklist_;  // element sets awaiting a pivot
  int pivot_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::size_t next_block_ = 0;
  std::vector<int> active_;
  int active_nos_ = 0;
  std::vector<int> below_, above_;  // classified sides of the current pivot
  std::vector<int> block_counts_;
};

// Tournament attack for max queries: orders r near-equal blocks recursively,
// then repeatedly asks for the maximum among the block leaders, answering
// "no" until one leader is forced, deleting it, and repeating. Each merge
// iteration with k live blocks forces k-1 mistakes.
class SelectionMergeAdversary : public Adversary {
 public:
  std::string name() const override { return "selection-merge"; }
  void begin(const GameView& view) override;
  bool round_available(const GameView& view) override;
  Query next_query(const GameView& view) override;
  Feedback feedback(const GameView& view, const Query& query,
                    const Guess& guess) override;

  // "no"s absorbed by the first merge iteration of the outermost frame.
  int first_merge_no_count() const { return first_merge_nos_; }

 private:
  struct Frame {
    std::vector<std::vector<int>> pending;  // blocks not yet ordered
    std::vector<std::vector<int>> stacks;   // ordered blocks, top = max
    std::vector<int> merged;                // output, descending
    bool root = false;
    bool first_iteration = true;
  };

  void advance(const GameView& view);
  std::vector<int> leaders() const;

  std::vector<Frame> frames_;
  int first_merge_nos_ = 0;
};

// Rank-query attack: places elements in input order; for each new element the
// feasible slots among the placed ones form an induced threshold game whose
// quantile separators pick the r comparison elements. Answers "no" while at
// least two slot classes remain. Works unchanged on pattern-avoiding
// families, where the set of feasible slots stays large by construction.
class RelposThresholdAdversary : public Adversary {
 public:
  std::string name() const override { return "relpos-threshold"; }
  void begin(const GameView& view) override;
  bool round_available(const GameView& view) override;
  Query next_query(const GameView& view) override;
  Feedback feedback(const GameView& view, const Query& query,
                    const Guess& guess) override;

  // Smallest slot window any element was introduced with, for invariant
  // tests on pattern-avoiding families.
  int min_feasible_slots() const { return min_feasible_; }

 private:
  void advance(const GameView& view);
  void refresh_feasible(const GameView& view);

  std::vector<int> placed_;  // input values in increasing committed rank
  int pending_ = 0;
  int measured_ = 0;           // last element whose intro window was recorded
  std::vector<int> feasible_;  // feasible slots for pending_, ascending
  int min_feasible_ = 1 << 30;
};

// Delayed variant of the rank-query attack: reveals the comparison elements
// one at a time, each the median separator of the slots consistent with the
// learner's calls so far this round, padding with already-settled elements to
// keep the revealed set distinct.
class DelayedRelposAdversary : public Adversary {
 public:
  std::string name() const override { return "delayed-relpos"; }
  void begin(const GameView& view) override;
  bool round_available(const GameView& view) override;
  int delayed_x(const GameView& view) override;
  int next_delayed_element(const GameView& view, const Query& partial,
                           const std::vector<int>& tokens_so_far) override;
  Feedback feedback(const GameView& view, const Query& query,
                    const Guess& guess) override;

 private:
  void advance(const GameView& view);
  void refresh_feasible(const GameView& view);

  std::vector<int> placed_;
  int pending_ = 0;
  std::vector<int> feasible_;
};

// Bucket-splitting attack on mod-p linear families restricted to nonzero
// coefficients: each round samples query tuples until one spreads the
// survivors across value buckets within the pairwise-independence bound, then
// answers "no". Continues while |survivors| >= p^{2r} ln p.
class LinearBucketAdversary : public Adversary {
 public:
  explicit LinearBucketAdversary(int attempt_budget = 32)
      : attempt_budget_(attempt_budget) {}

  std::string name() const override { return "linear-bucket"; }
  void begin(const GameView& view) override;
  bool round_available(const GameView& view) override;
  Query next_query(const GameView& view) override;
  Feedback feedback(const GameView& view, const Query& query,
                    const Guess& guess) override;

  // Rounds where no sampled tuple met the bucket bound (fallback played).
  int warnings() const { return warnings_; }
  // Max bucket size of each accepted tuple, one entry per round.
  const std::vector<long long>& accepted_scores() const { return scores_; }

 private:
  std::vector<int> coefficient_of(const GameView& view, int h) const;

  int attempt_budget_;
  int modulus_ = 0;
  int dimension_ = 0;
  int warnings_ = 0;
  std::vector<long long> scores_;
};

// Truthful noise: commits to a random surviving hypothesis and answers for
// it, asking uniformly random valid queries. Works under every protocol.
class RandomTruthfulAdversary : public Adversary {
 public:
  explicit RandomTruthfulAdversary(long long budget = 64) : budget_(budget) {}

  std::string name() const override { return "random"; }
  void begin(const GameView& view) override;
  bool round_available(const GameView& view) override;
  Query next_query(const GameView& view) override;
  int next_amb_input(const GameView& view, const Query& partial,
                     const std::vector<int>& labels_so_far) override;
  int delayed_x(const GameView& view) override;
  int next_delayed_element(const GameView& view, const Query& partial,
                           const std::vector<int>& tokens_so_far) override;
  Feedback feedback(const GameView& view, const Query& query,
                    const Guess& guess) override;

 private:
  long long budget_ = 64;
  long long rounds_done_ = 0;
  int target_ = 0;
};

// Known names: threshold-maximin, amb-median, insertion, merge, quicksort,
// selection-merge, relpos-threshold, relpos-avoiding (alias), delayed-relpos,
// linear-bucket, random. Options: budget (random), attempts (linear-bucket).
std::unique_ptr<Adversary> make_adversary(
    const std::string& name,
    const std::map<std::string, std::string>& options = {});

// Window form of the insertion attack, for ground sets too large to simulate
// through run_game. claim_low(lo, hi, mid) is the learner side: true claims
// the slot is in [lo, mid], false claims [mid+1, hi]; the answer is always
// "no". Returns the total forced mistakes, at least p(n) for every guesser.
long long insertion_window_mistakes(
    int n, const std::function<bool(int lo, int hi, int mid)>& claim_low);

}  // namespace mbl
