#include "mbl/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mbl/verify.hpp"

namespace mbl {

namespace {

// Largest class in parts; ties go to the lexicographically smallest answer,
// which is the first one in map order.
std::vector<int> plurality_answer(
    const std::map<std::vector<int>, std::vector<int>>& parts) {
  std::vector<int> best;
  std::size_t best_size = 0;
  for (const auto& [answer, states] : parts)
    if (states.size() > best_size) {
      best = answer;
      best_size = states.size();
    }
  return best;
}

std::vector<int> prefix_consistent(const GameView& view, const Query& partial,
                                   const std::vector<int>& labels_so_far) {
  std::vector<int> keep;
  for (int h : view.version_space) {
    bool ok = true;
    for (std::size_t i = 0; i < labels_so_far.size(); ++i)
      if (view.family.eval(h, partial.inputs[i]) != labels_so_far[i]) {
        ok = false;
        break;
      }
    if (ok) keep.push_back(h);
  }
  return keep;
}

int plurality_label(const GameView& view, const std::vector<int>& hyps, int x) {
  std::vector<int> counts(view.family.label_count(), 0);
  for (int h : hyps) ++counts[view.family.eval(h, x)];
  int best = 0;
  for (int label = 1; label < view.family.label_count(); ++label)
    if (counts[label] > counts[best]) best = label;
  return best;
}

int majority_below_token(const GameView& view, const std::vector<int>& hyps,
                         int x, int elem) {
  int below = 0;
  for (int h : hyps)
    if (view.family.eval(h, elem) < view.family.eval(h, x)) ++below;
  return 2 * below > static_cast<int>(hyps.size()) ? 1 : 0;
}

}  // namespace

Guess HalvingLearner::guess(const GameView& view, const Query& query) {
  auto parts = partition_by_answer(view.protocol, view.family,
                                   view.version_space, query);
  Guess g;
  g.values = plurality_answer(parts);
  return g;
}

int GreedySubroundLearner::subround_label(const GameView& view,
                                          const Query& partial,
                                          const std::vector<int>& labels_so_far) {
  auto live = prefix_consistent(view, partial, labels_so_far);
  if (live.empty()) live = view.version_space;
  return plurality_label(view, live, partial.inputs.back());
}

int GreedySubroundLearner::subround_token(const GameView& view,
                                          const Query& partial,
                                          const std::vector<int>&) {
  return majority_below_token(view, view.version_space, partial.inputs.front(),
                              partial.inputs.back());
}

Guess EliminateOneLearner::guess(const GameView& view, const Query& query) {
  Guess g;
  g.values = answer_of(view.protocol, view.family, view.version_space.front(),
                       query);
  return g;
}

int EliminateOneLearner::subround_label(const GameView& view,
                                        const Query& partial,
                                        const std::vector<int>&) {
  return view.family.eval(view.version_space.front(), partial.inputs.back());
}

int EliminateOneLearner::subround_token(const GameView& view,
                                        const Query& partial,
                                        const std::vector<int>&) {
  int h = view.version_space.front();
  return view.family.eval(h, partial.inputs.back()) <
                 view.family.eval(h, partial.inputs.front())
             ? 1
             : 0;
}

Guess RandomLearner::guess(const GameView& view, const Query& query) {
  Guess g;
  auto& rng = *view.rng;
  std::uniform_int_distribution<int> label(0, view.family.label_count() - 1);
  switch (view.protocol.model) {
    case Model::cart:
    case Model::amb:
      for (std::size_t i = 0; i < query.inputs.size(); ++i)
        g.values.push_back(label(rng));
      break;
    case Model::order: {
      g.values.resize(view.protocol.r);
      std::iota(g.values.begin(), g.values.end(), 1);
      std::shuffle(g.values.begin(), g.values.end(), rng);
      break;
    }
    case Model::comparison: {
      std::uniform_int_distribution<int> bit(0, 1);
      for (std::size_t i = 0; i < query.pairs.size(); ++i)
        g.values.push_back(bit(rng));
      break;
    }
    case Model::selection: {
      std::uniform_int_distribution<std::size_t> pick(0,
                                                      query.inputs.size() - 1);
      g.values.push_back(query.inputs[pick(rng)]);
      break;
    }
    case Model::relpos: {
      std::uniform_int_distribution<int> rank(1, view.protocol.r + 1);
      g.values.push_back(rank(rng));
      break;
    }
    case Model::delayed_relpos:
      throw config_error("random learner answers delayed rounds by tokens");
  }
  return g;
}

int RandomLearner::subround_label(const GameView& view, const Query&,
                                  const std::vector<int>&) {
  std::uniform_int_distribution<int> label(0, view.family.label_count() - 1);
  return label(*view.rng);
}

int RandomLearner::subround_token(const GameView& view, const Query&,
                                  const std::vector<int>&) {
  std::uniform_int_distribution<int> bit(0, 1);
  return bit(*view.rng);
}

ExpertPoolLearner::ExpertPoolLearner(int r, int label_count,
                                     std::size_t max_experts)
    : r_(r), label_count_(label_count), max_experts_(max_experts) {
  if (r < 1 || label_count < 2)
    throw config_error("expert pool needs r >= 1 and k >= 2");
  double tuples = std::pow(static_cast<double>(label_count), r);
  if (tuples > static_cast<double>(1 << 20))
    throw size_cap_error("expert pool answer space k^r exceeds 2^20");
  alpha_ = expert_pool_alpha(label_count, r);
  experts_.push_back(Expert{});
}

std::vector<int> ExpertPoolLearner::expert_live(const GameView& view,
                                                const Expert& expert) const {
  std::vector<int> live(view.family.size());
  std::iota(live.begin(), live.end(), 0);
  for (const auto& [fed_query, fed_answer] : expert.fed)
    live = filter_consistent(view.protocol, view.family, live, fed_query,
                             fed_answer);
  return live;
}

std::vector<int> ExpertPoolLearner::expert_guess(const GameView& view,
                                                 const Expert& expert,
                                                 const Query& query) const {
  auto live = expert_live(view, expert);
  if (live.empty()) return std::vector<int>(r_, 0);
  auto parts = partition_by_answer(view.protocol, view.family, live, query);
  return plurality_answer(parts);
}

void ExpertPoolLearner::check_protocol(const GameView& view) const {
  if (view.protocol.r != r_ || view.family.label_count() != label_count_)
    throw config_error("expert pool was sized for a different protocol");
}

Guess ExpertPoolLearner::guess(const GameView& view, const Query& query) {
  if (view.protocol.model != Model::cart)
    throw config_error("expert pool plays label-tuple rounds only");
  check_protocol(view);

  round_guesses_.clear();
  std::map<std::vector<int>, double> votes;
  for (const auto& expert : experts_) {
    auto g = expert_guess(view, expert, query);
    votes[g] += std::pow(alpha_, expert.exponent);
    round_guesses_.push_back(std::move(g));
  }
  double best = 0;
  for (const auto& [answer, weight] : votes) best = std::max(best, weight);
  std::vector<const std::vector<int>*> tied;
  for (const auto& [answer, weight] : votes)
    if (weight >= best * (1.0 - 1e-12)) tied.push_back(&answer);
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);

  Guess g;
  g.values = *tied[pick(*view.rng)];
  return g;
}

int ExpertPoolLearner::subround_label(const GameView& view,
                                      const Query& partial,
                                      const std::vector<int>& labels_so_far) {
  if (view.protocol.model != Model::amb)
    throw config_error("expert pool subrounds belong to the amb protocol");
  check_protocol(view);
  if (labels_so_far.empty())
    round_guesses_.assign(experts_.size(), {});

  int x = partial.inputs.back();
  std::map<int, double> votes;
  for (std::size_t e = 0; e < experts_.size(); ++e) {
    auto live = expert_live(view, experts_[e]);
    // Condition on this copy's own earlier answers this round, falling back
    // to its unconditioned view when they have ruled everything out.
    std::vector<int> in_round;
    for (int h : live) {
      bool ok = true;
      for (std::size_t i = 0; i < round_guesses_[e].size(); ++i)
        if (view.family.eval(h, partial.inputs[i]) != round_guesses_[e][i]) {
          ok = false;
          break;
        }
      if (ok) in_round.push_back(h);
    }
    if (in_round.empty()) in_round = std::move(live);
    int label = 0;
    if (!in_round.empty()) {
      std::vector<int> counts(label_count_, 0);
      for (int h : in_round) ++counts[view.family.eval(h, x)];
      for (int l = 1; l < label_count_; ++l)
        if (counts[l] > counts[label]) label = l;
    }
    round_guesses_[e].push_back(label);
    votes[label] += std::pow(alpha_, experts_[e].exponent);
  }
  double best = 0;
  for (const auto& [label, weight] : votes) best = std::max(best, weight);
  std::vector<int> tied;
  for (const auto& [label, weight] : votes)
    if (weight >= best * (1.0 - 1e-12)) tied.push_back(label);
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(*view.rng)];
}

void ExpertPoolLearner::observe(const GameView&, const Query& query,
                                const Guess& guess, const Feedback& feedback) {
  if (feedback.kind != FeedbackKind::no) return;
  const std::vector<int>& played = guess.values;
  std::vector<Expert> next;
  for (std::size_t e = 0; e < experts_.size(); ++e) {
    if (round_guesses_[e] != played) {
      // A losing vote: rewound as if the round had not happened.
      next.push_back(std::move(experts_[e]));
      continue;
    }
    // This expert backed the played tuple, so the truth is one of the
    // alternatives; spawn one clone per alternative.
    std::vector<int> alt(r_, 0);
    while (true) {
      if (alt != played) {
        Expert clone = experts_[e];
        clone.fed.emplace_back(query, alt);
        ++clone.exponent;
        next.push_back(std::move(clone));
        if (next.size() > max_experts_)
          throw size_cap_error("expert pool exceeded its size cap");
      }
      int i = 0;
      for (;;) {
        if (++alt[i] < label_count_) break;
        alt[i] = 0;
        if (++i == r_) goto done;
      }
    }
  done:;
  }
  experts_ = std::move(next);
}

std::unique_ptr<Learner> make_learner(const std::string& name, int r,
                                      int label_count) {
  if (name == "halving") return std::make_unique<HalvingLearner>();
  if (name == "greedy-subround") return std::make_unique<GreedySubroundLearner>();
  if (name == "eliminate-one") return std::make_unique<EliminateOneLearner>();
  if (name == "random") return std::make_unique<RandomLearner>();
  if (name == "expert-pool")
    return std::make_unique<ExpertPoolLearner>(r, label_count);
  throw config_error("unknown learner: " + name);
}

}  // namespace mbl
