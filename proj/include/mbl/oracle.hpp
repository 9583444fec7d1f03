#pragma once

#include <cstddef>
#include <memory>
#include <ostream>
#include <string>

#include "mbl/engine.hpp"

namespace mbl {

struct SolveCaps {
  std::size_t max_hyps = 12;     // soft cap; the bitset encoding stops at 64
  std::size_t max_queries = 64;  // enumerated queries (or inputs) per round
};

// Exact minimax value of the game: the worst-case mistake count an optimal
// learner concedes to an optimal truthful adversary. Weak protocols branch
// over yes/no feedback, reveal protocols over realized answers; rounds that
// cannot change the version space are skipped on both sides. delayed_relpos
// is solved at r=1, where it coincides with relpos, and rejected for larger
// r. Throws size_cap_error when the family or query space exceeds caps.
long long exact_opt(const Protocol& protocol, const FunctionFamily& family,
                    const SolveCaps& caps = {});

// True iff bundling r inputs per revealed round leaves the game value
// unchanged: exact_opt of the r-fold product family under single-input
// revealed rounds equals exact_opt of the family itself.
bool exact_opt_invariance_check(const FunctionFamily& family, int r,
                                const SolveCaps& caps = {});

// Worst-case mistakes a fixed deterministic consistent learner concedes: the
// solver plays every truthful adversary line against the learner's actual
// guesses. The learner must be stateless across rounds and must never guess
// an answer no survivor holds (throws precondition_error if it does, since
// the adversary could then force mistakes forever).
long long worst_case_vs_learner(const Protocol& protocol,
                                const FunctionFamily& family, Learner& learner,
                                const SolveCaps& caps = {});

// Indented text rendering of one optimal adversary line: the maximizing
// query at each version space, the learner's best response, and both
// feedback branches. One-shot protocols only.
std::string solve_tree(const Protocol& protocol, const FunctionFamily& family,
                       const SolveCaps& caps = {});

// Plays the minimax best response for the current version space under the
// solver's game tree. Handles one-shot protocols, amb subrounds, and
// delayed rounds at r=1.
class OptimalLearner : public Learner {
 public:
  OptimalLearner(const Protocol& protocol, const FunctionFamily& family,
                 SolveCaps caps = {});
  ~OptimalLearner() override;

  std::string name() const override { return "optimal"; }
  Guess guess(const GameView& view, const Query& query) override;
  int subround_label(const GameView& view, const Query& partial,
                     const std::vector<int>& labels_so_far) override;
  int subround_token(const GameView& view, const Query& partial,
                     const std::vector<int>& tokens_so_far) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mbl
