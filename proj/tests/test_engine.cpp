#include <sstream>

#include "doctest.h"
#include "mbl/adversaries.hpp"
#include "mbl/engine.hpp"
#include "mbl/learners.hpp"

using namespace mbl;

namespace {

FunctionFamily perms(int n) { return build_permutation_family(n).materialize(); }

Transcript run(const Protocol& protocol, const FunctionFamily& family,
               const std::string& learner, const std::string& adversary,
               std::uint64_t seed = 1, long long budget = 1000) {
  auto l = make_learner(learner, protocol.r, family.label_count());
  auto a = make_adversary(adversary);
  RunOptions options;
  options.seed = seed;
  options.max_rounds = budget;
  return run_game(protocol, family, *l, *a, options);
}

}  // namespace

TEST_CASE("protocol parsing") {
  auto std1 = parse_protocol("standard", 1, false);
  CHECK(std1.model == Model::cart);
  CHECK(std1.reveal);
  auto bandit = parse_protocol("bandit", 1, false);
  CHECK(!bandit.reveal);
  CHECK(parse_protocol("bandit", 1, true).reveal);
  auto cw = parse_protocol("cart_weak", 3, false);
  CHECK(cw.model == Model::cart);
  CHECK(cw.r == 3);
  CHECK(!cw.reveal);
  CHECK(parse_protocol("order", 2, true).reveal);
  CHECK(parse_protocol("delayed-relpos", 2, false).model ==
        Model::delayed_relpos);

  CHECK_THROWS_AS(parse_protocol("standard", 2, false), config_error);
  CHECK_THROWS_AS(parse_protocol("amb", 2, true), config_error);
  CHECK_THROWS_AS(parse_protocol("nope", 1, false), config_error);
  CHECK(protocol_name(cw) == "cart[r=3,bandit]");
}

TEST_CASE("answers per model") {
  auto fam = perms(4);
  // Hypothesis 0 is the identity permutation.
  int id = 0;
  Protocol order{Model::order, 3, false};
  CHECK(answer_of(order, fam, id, Query{{1, 2, 4}, {}}) ==
        std::vector<int>{1, 2, 3});

  Protocol comparison{Model::comparison, 2, false};
  Query pairs;
  pairs.pairs = {{1, 2}, {4, 3}};
  CHECK(answer_of(comparison, fam, id, pairs) == std::vector<int>{1, 0});

  Protocol selection{Model::selection, 3, false};
  CHECK(answer_of(selection, fam, id, Query{{2, 4, 2}, {}}) ==
        std::vector<int>{4});

  Protocol relpos{Model::relpos, 2, false};
  CHECK(answer_of(relpos, fam, id, Query{{3, 1, 4}, {}}) ==
        std::vector<int>{2});

  Protocol cart{Model::cart, 2, false};
  auto thr = build_threshold_family(4, {2, 3}).materialize();
  CHECK(answer_of(cart, thr, 0, Query{{1, 4}, {}}) == std::vector<int>{0, 1});
}

TEST_CASE("delayed guesses collapse to a rank") {
  Protocol delayed{Model::delayed_relpos, 3, false};
  Guess guess;
  guess.tokens = {1, 0, 1};
  CHECK(canonical_guess(delayed, guess) == std::vector<int>{3});
}

TEST_CASE("query validation") {
  auto fam = perms(4);
  Protocol order{Model::order, 2, false};
  CHECK_THROWS_AS(validate_query(order, fam, Query{{2, 1}, {}}), query_error);
  CHECK_THROWS_AS(validate_query(order, fam, Query{{1, 5}, {}}), query_error);
  CHECK_NOTHROW(validate_query(order, fam, Query{{1, 3}, {}}));

  Protocol selection{Model::selection, 2, false};
  CHECK_NOTHROW(validate_query(selection, fam, Query{{3, 3}, {}}));

  Protocol relpos{Model::relpos, 2, false};
  CHECK_THROWS_AS(validate_query(relpos, fam, Query{{1, 2, 2}, {}}),
                  query_error);

  Protocol comparison{Model::comparison, 1, false};
  Query pair;
  pair.pairs = {{2, 2}};
  CHECK_THROWS_AS(validate_query(comparison, fam, pair), query_error);
}

TEST_CASE("guess validation") {
  auto fam = perms(4);
  Protocol selection{Model::selection, 2, false};
  Query query{{2, 4}, {}};
  Guess right;
  right.values = {4};
  CHECK_NOTHROW(validate_guess(selection, fam, query, right));
  Guess wrong;
  wrong.values = {3};  // not one of the queried inputs
  CHECK_THROWS_AS(validate_guess(selection, fam, query, wrong),
                  feedback_error);

  auto thr = build_threshold_family(4, {2, 3}).materialize();
  Protocol cart{Model::cart, 2, false};
  Guess labels;
  labels.values = {0, 2};
  CHECK_THROWS_AS(validate_guess(cart, thr, Query{{1, 2}, {}}, labels),
                  feedback_error);
}

TEST_CASE("feedback must be consistent with a survivor") {
  auto thr = build_threshold_family(4, {1, 3}).materialize();
  Protocol bandit = parse_protocol("bandit", 1, false);
  std::vector<int> V{0, 1};
  Query query{{2}, {}};
  Guess guess;
  guess.values = {1};  // only hypothesis 0 agrees at x=2
  CHECK(validate_feedback(bandit, thr, V, query, guess,
                          Feedback{FeedbackKind::yes, {}}));
  CHECK(validate_feedback(bandit, thr, V, query, guess,
                          Feedback{FeedbackKind::no, {}}));
  std::vector<int> only0{0};
  CHECK(!validate_feedback(bandit, thr, only0, query, guess,
                           Feedback{FeedbackKind::no, {}}));
  Protocol standard = parse_protocol("standard", 1, false);
  CHECK(!validate_feedback(standard, thr, V, query, guess,
                           Feedback{FeedbackKind::yes, {}}));
  CHECK(validate_feedback(standard, thr, V, query, guess,
                          Feedback{FeedbackKind::reveal, {1}}));
}

TEST_CASE("singleton family never costs a mistake") {
  FunctionFamily fam(3, 2, {{0, 1, 0}});
  for (const char* learner : {"halving", "eliminate-one"}) {
    auto t = run(parse_protocol("bandit", 1, false), fam, learner, "random", 5,
                 10);
    CHECK(!t.faulted());
    CHECK(t.mistakes == 0);
  }
}

TEST_CASE("four thresholds cost halving exactly two mistakes") {
  auto fam = build_threshold_family(4, {1, 2, 3, 4}).materialize();
  auto t = run(Protocol{Model::cart, 1, false}, fam, "halving",
               "threshold-maximin");
  CHECK(!t.faulted());
  CHECK(t.mistakes >= 2);
  CHECK(t.mistakes <= 2);  // floor(log2 4)
  CHECK(t.final_version_space_size == 1);
}

TEST_CASE("version space shrinks monotonically and stays nonempty") {
  auto fam = spread_threshold_family(8).materialize();
  for (const char* learner : {"halving", "eliminate-one", "random"}) {
    auto t = run(Protocol{Model::cart, 2, false}, fam, learner,
                 "threshold-maximin", 3);
    CHECK(!t.faulted());
    std::size_t prev = fam.size();
    for (const auto& rec : t.rounds) {
      CHECK(rec.version_space_size <= prev);
      CHECK(rec.version_space_size >= 1);
      prev = rec.version_space_size;
    }
  }
}

TEST_CASE("illegal adversary input is recorded as a fault") {
  struct Bad : Adversary {
    std::string name() const override { return "bad"; }
    bool round_available(const GameView&) override { return true; }
    Query next_query(const GameView&) override { return Query{{99}, {}}; }
    Feedback feedback(const GameView&, const Query&, const Guess&) override {
      return Feedback{FeedbackKind::no, {}};
    }
  } bad;
  auto fam = build_threshold_family(4, {2, 3}).materialize();
  HalvingLearner halving;
  auto t = run_game(Protocol{Model::cart, 1, false}, fam, halving, bad, {});
  CHECK(t.faulted());
  CHECK(t.fault.find("adversary-fault") == 0);
  CHECK(t.rounds.size() == 1);
}

TEST_CASE("untruthful feedback is recorded as an adversary fault") {
  struct Liar : Adversary {
    std::string name() const override { return "liar"; }
    bool round_available(const GameView&) override { return true; }
    Query next_query(const GameView&) override { return Query{{1}, {}}; }
    Feedback feedback(const GameView&, const Query&, const Guess&) override {
      return Feedback{FeedbackKind::no, {}};  // untruthful once V is pinned
    }
  } liar;
  // Both rows label x=1 with 0, so halving's guess agrees with everything
  // and "no" has no witness.
  auto fam = build_threshold_family(4, {2, 3}).materialize();
  HalvingLearner halving;
  auto t = run_game(Protocol{Model::cart, 1, false}, fam, halving, liar, {});
  CHECK(t.faulted());
  CHECK(t.fault == "adversary-fault: no while every hypothesis agrees");
}

TEST_CASE("malformed learner guesses are learner faults") {
  struct BadLearner : Learner {
    std::string name() const override { return "bad"; }
    Guess guess(const GameView&, const Query&) override {
      Guess g;
      g.values = {7};
      return g;
    }
  } bad;
  auto fam = build_threshold_family(4, {2, 3}).materialize();
  ThresholdMaximinAdversary adversary;
  auto t = run_game(Protocol{Model::cart, 1, false}, fam, bad, adversary, {});
  CHECK(t.faulted());
  CHECK(t.fault.find("learner-fault") == 0);
}

TEST_CASE("permutation protocols reject non-permutation families") {
  auto thr = build_threshold_family(4, {2, 3}).materialize();
  HalvingLearner halving;
  RandomTruthfulAdversary adversary;
  CHECK_THROWS_AS(
      run_game(Protocol{Model::order, 2, false}, thr, halving, adversary, {}),
      config_error);
  auto fam = perms(3);
  CHECK_THROWS_AS(
      run_game(Protocol{Model::order, 4, false}, fam, halving, adversary, {}),
      config_error);
  CHECK_THROWS_AS(
      run_game(Protocol{Model::relpos, 3, false}, fam, halving, adversary, {}),
      config_error);
}

TEST_CASE("transcripts serialize deterministically") {
  auto fam = spread_threshold_family(8).materialize();
  auto render = [&](std::uint64_t seed) {
    auto t = run(Protocol{Model::cart, 1, false}, fam, "random", "random", seed,
                 16);
    std::ostringstream os;
    write_transcript_csv(os, t);
    return os.str();
  };
  auto a = render(42), b = render(42), c = render(43);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.rfind("# mbl-csv v1\nround,query,guess,feedback,mistake,"
                "version_space_size\n", 0) == 0);
}

TEST_CASE("csv records faults as a trailing comment") {
  struct Bad : Adversary {
    std::string name() const override { return "bad"; }
    bool round_available(const GameView&) override { return true; }
    Query next_query(const GameView&) override { return Query{{99}, {}}; }
    Feedback feedback(const GameView&, const Query&, const Guess&) override {
      return Feedback{FeedbackKind::no, {}};
    }
  } bad;
  auto fam = build_threshold_family(4, {2, 3}).materialize();
  HalvingLearner halving;
  auto t = run_game(Protocol{Model::cart, 1, false}, fam, halving, bad, {});
  std::ostringstream os;
  write_transcript_csv(os, t);
  CHECK(os.str().find("# fault: adversary-fault") != std::string::npos);
}
