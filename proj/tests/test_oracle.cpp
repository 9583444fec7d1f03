#include <string>
#include <vector>

#include "doctest.h"
#include "mbl/adversaries.hpp"
#include "mbl/engine.hpp"
#include "mbl/errors.hpp"
#include "mbl/families.hpp"
#include "mbl/learners.hpp"
#include "mbl/oracle.hpp"

using namespace mbl;

namespace {

FunctionFamily first_thresholds(int n) {
  std::vector<int> t;
  for (int i = 1; i <= n; ++i) t.push_back(i);
  return build_threshold_family(n, t).materialize();
}

FunctionFamily sym(int n) { return build_permutation_family(n).materialize(); }

Protocol weak(Model model, int r) { return Protocol{model, r, false}; }

const Protocol standard{Model::cart, 1, true};

}  // namespace

TEST_CASE("a singleton family costs nothing") {
  auto fam = first_thresholds(1);
  CHECK(exact_opt(standard, fam) == 0);
  CHECK(exact_opt(weak(Model::cart, 1), fam) == 0);
}

TEST_CASE("threshold families cost the binary log") {
  auto f3 = first_thresholds(3);
  auto f4 = first_thresholds(4);
  CHECK(exact_opt(standard, f3) == 1);
  CHECK(exact_opt(standard, f4) == 2);
  // Binary labels make a no as informative as a reveal.
  CHECK(exact_opt(weak(Model::cart, 1), f4) == 2);
  CHECK(exact_opt(weak(Model::cart, 1), f3) == 1);
}

TEST_CASE("full mod-p linear families cost the dimension") {
  auto f22 = build_linear_family(2, 2, false).materialize();
  auto f32 = build_linear_family(3, 2, false).materialize();
  CHECK(exact_opt(standard, f22) == 2);
  CHECK(exact_opt(standard, f32) == 2);
}

TEST_CASE("the optimum never grows when hypotheses are dropped") {
  auto f4 = first_thresholds(4);
  auto f3 = first_thresholds(3);
  CHECK(exact_opt(standard, f3) <= exact_opt(standard, f4));
  CHECK(exact_opt(weak(Model::cart, 1), f3) <=
        exact_opt(weak(Model::cart, 1), f4));
}

TEST_CASE("bundling inputs into revealed rounds keeps the optimum") {
  CHECK(exact_opt_invariance_check(first_thresholds(3), 2));
  CHECK(exact_opt_invariance_check(first_thresholds(1), 3));
  CHECK(exact_opt_invariance_check(
      build_linear_family(2, 2, false).materialize(), 2));
}

TEST_CASE("rank, pair, pattern, and max encodings agree on S_3") {
  auto s3 = sym(3);
  long long order = exact_opt(weak(Model::order, 2), s3);
  long long pairs = exact_opt(weak(Model::comparison, 1), s3);
  long long maxes = exact_opt(weak(Model::selection, 2), s3);
  long long ranks = exact_opt(weak(Model::relpos, 1), s3);
  CHECK(order == pairs);
  CHECK(order == maxes);
  CHECK(order == ranks);
  CHECK(order >= 2);
  CHECK(order <= 5);
}

TEST_CASE("subround play matches single-input play at r=1") {
  auto f4 = first_thresholds(4);
  auto f3 = first_thresholds(3);
  CHECK(exact_opt(weak(Model::amb, 1), f4) ==
        exact_opt(weak(Model::cart, 1), f4));
  CHECK(exact_opt(weak(Model::amb, 1), f3) ==
        exact_opt(weak(Model::cart, 1), f3));
}

TEST_CASE("adaptive subround inputs never help the learner") {
  auto f4 = first_thresholds(4);
  long long staged = exact_opt(weak(Model::amb, 2), f4);
  CHECK(staged >= exact_opt(weak(Model::cart, 2), f4));
  CHECK(staged <= 3);  // losing a hypothesis per mistake is always possible
}

TEST_CASE("delayed rank play reduces to immediate rank play at r=1") {
  auto s3 = sym(3);
  CHECK(exact_opt(weak(Model::delayed_relpos, 1), s3) ==
        exact_opt(weak(Model::relpos, 1), s3));
  CHECK_THROWS_AS(exact_opt(weak(Model::delayed_relpos, 2), s3),
                  config_error);
}

TEST_CASE("caps bound the solver") {
  CHECK_THROWS_AS(exact_opt(weak(Model::comparison, 1), sym(4)),
                  size_cap_error);
  CHECK_THROWS_AS(exact_opt(standard, first_thresholds(13)), size_cap_error);
  // 120 non-decreasing triples over eight inputs exceed the query cap.
  CHECK_THROWS_AS(exact_opt(weak(Model::cart, 3), first_thresholds(8)),
                  size_cap_error);
  SolveCaps wide;
  wide.max_hyps = 24;
  CHECK(exact_opt(weak(Model::comparison, 1), sym(4), wide) >= 4);
}

TEST_CASE("permutation protocols reject non-permutation families") {
  CHECK_THROWS_AS(exact_opt(weak(Model::order, 2), first_thresholds(4)),
                  config_error);
}

TEST_CASE("the best response concedes exactly the optimum") {
  auto f4 = first_thresholds(4);
  auto s3 = sym(3);
  auto f22 = build_linear_family(2, 2, false).materialize();
  const std::pair<Protocol, const FunctionFamily*> cases[] = {
      {standard, &f4},
      {weak(Model::cart, 1), &f4},
      {weak(Model::cart, 2), &f4},
      {standard, &f22},
      {weak(Model::comparison, 1), &s3},
      {weak(Model::relpos, 1), &s3},
      {weak(Model::delayed_relpos, 1), &s3},
      {weak(Model::amb, 1), &f4},
      {weak(Model::amb, 2), &f4},
  };
  for (const auto& [protocol, fam] : cases) {
    CAPTURE(protocol_name(protocol));
    OptimalLearner learner(protocol, *fam);
    CHECK(worst_case_vs_learner(protocol, *fam, learner) ==
          exact_opt(protocol, *fam));
  }
}

TEST_CASE("halving concedes the binary log on thresholds") {
  auto f4 = first_thresholds(4);
  HalvingLearner halving;
  CHECK(worst_case_vs_learner(weak(Model::cart, 1), f4, halving) == 2);
  CHECK(worst_case_vs_learner(standard, f4, halving) == 2);
  EliminateOneLearner one_at_a_time;
  CHECK(worst_case_vs_learner(weak(Model::cart, 1), f4, one_at_a_time) >=
        exact_opt(weak(Model::cart, 1), f4));
  CHECK(worst_case_vs_learner(weak(Model::cart, 1), f4, one_at_a_time) <= 3);
}

TEST_CASE("a learner guessing against unanimity is rejected") {
  struct Wild : Learner {
    std::string name() const override { return "wild"; }
    Guess guess(const GameView&, const Query&) override {
      Guess g;
      g.values = {0};
      return g;
    }
  };
  // Input 4 is unanimously labeled 1, so the fixed guess 0 matches nobody.
  Wild wild;
  CHECK_THROWS_AS(
      worst_case_vs_learner(weak(Model::cart, 1), first_thresholds(4), wild),
      precondition_error);
}

TEST_CASE("the optimal learner survives live play") {
  auto f4 = first_thresholds(4);
  RunOptions opts;
  opts.seed = 7;

  Protocol bandit = weak(Model::cart, 1);
  OptimalLearner single(bandit, f4);
  ThresholdMaximinAdversary maximin;
  auto t = run_game(bandit, f4, single, maximin, opts);
  CHECK(t.fault.empty());
  CHECK(t.mistakes <= exact_opt(bandit, f4));

  Protocol staged = weak(Model::amb, 2);
  OptimalLearner subrounds(staged, f4);
  AmbMedianAdversary median;
  auto u = run_game(staged, f4, subrounds, median, opts);
  CHECK(u.fault.empty());
  CHECK(u.mistakes <= exact_opt(staged, f4));
  CHECK(subrounds.name() == "optimal");
}

TEST_CASE("the tree opens with the game value") {
  auto text = solve_tree(standard, first_thresholds(4));
  CHECK(text.rfind("4 hypotheses, value 2", 0) == 0);
  CHECK(text.find("ask") != std::string::npos);
  CHECK_THROWS_AS(solve_tree(weak(Model::amb, 1), first_thresholds(4)),
                  config_error);
}
