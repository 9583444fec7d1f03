#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mbl/engine.hpp"

namespace mbl {

// Plurality vote over the full answer vectors of the surviving hypotheses.
// One-shot protocols only; ties break toward the smallest answer.
class HalvingLearner : public Learner {
 public:
  std::string name() const override { return "halving"; }
  Guess guess(const GameView& view, const Query& query) override;
};

// Subround protocols: answers each partial question with the plurality vote
// of the hypotheses still consistent with this round's earlier answers.
class GreedySubroundLearner : public Learner {
 public:
  std::string name() const override { return "greedy-subround"; }
  int subround_label(const GameView& view, const Query& partial,
                     const std::vector<int>& labels_so_far) override;
  int subround_token(const GameView& view, const Query& partial,
                     const std::vector<int>& tokens_so_far) override;
};

// Plays the answer of the first surviving hypothesis; every no removes it.
class EliminateOneLearner : public Learner {
 public:
  std::string name() const override { return "eliminate-one"; }
  Guess guess(const GameView& view, const Query& query) override;
  int subround_label(const GameView& view, const Query& partial,
                     const std::vector<int>& labels_so_far) override;
  int subround_token(const GameView& view, const Query& partial,
                     const std::vector<int>& tokens_so_far) override;
};

// Uniform random valid guesses; a noise floor for experiments.
class RandomLearner : public Learner {
 public:
  std::string name() const override { return "random"; }
  Guess guess(const GameView& view, const Query& query) override;
  int subround_label(const GameView& view, const Query& partial,
                     const std::vector<int>& labels_so_far) override;
  int subround_token(const GameView& view, const Query& partial,
                     const std::vector<int>& tokens_so_far) override;
};

// Converts a full-feedback learner into a yes/no one for label-tuple rounds.
// Each expert is a simulated copy of the base learner (plurality over the
// hypotheses consistent with the answers that copy has been fed). The pool
// plays a weighted plurality of expert guesses, weight alpha^exponent with
// alpha = 1 / (k^r ln k). On a no, every expert that voted for the played
// tuple is replaced by k^r - 1 clones, one per alternative answer, each fed
// that alternative with its exponent raised by one. Other experts, and all
// experts on a yes, are untouched.
class ExpertPoolLearner : public Learner {
 public:
  struct Expert {
    std::vector<std::pair<Query, std::vector<int>>> fed;
    int exponent = 0;
  };

  ExpertPoolLearner(int r, int label_count, std::size_t max_experts = 1 << 15);

  std::string name() const override { return "expert-pool"; }
  Guess guess(const GameView& view, const Query& query) override;
  int subround_label(const GameView& view, const Query& partial,
                     const std::vector<int>& labels_so_far) override;
  void observe(const GameView& view, const Query& query, const Guess& guess,
               const Feedback& feedback) override;

  double alpha() const { return alpha_; }
  const std::vector<Expert>& experts() const { return experts_; }

 private:
  std::vector<int> expert_live(const GameView& view,
                               const Expert& expert) const;
  std::vector<int> expert_guess(const GameView& view, const Expert& expert,
                                const Query& query) const;
  void check_protocol(const GameView& view) const;

  int r_;
  int label_count_;
  std::size_t max_experts_;
  double alpha_;
  std::vector<Expert> experts_;
  std::vector<std::vector<int>> round_guesses_;
};

std::unique_ptr<Learner> make_learner(const std::string& name, int r,
                                      int label_count);

}  // namespace mbl
