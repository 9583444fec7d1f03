#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mbl/errors.hpp"
#include "mbl/families.hpp"

namespace mbl {

// Round shapes. cart asks r inputs at once; amb feeds them one at a time and
// grades the whole tuple; the permutation models ask about relative order.
enum class Model {
  cart,
  amb,
  order,
  comparison,
  selection,
  relpos,
  delayed_relpos,
};

struct Protocol {
  Model model = Model::cart;
  int r = 1;
  // reveal = true means the true answer is shown after each round (standard
  // feedback); false means a bare yes/no (bandit feedback).
  bool reveal = false;
};

bool is_one_shot(Model model);
bool is_permutation_model(Model model);
std::string model_name(Model model);
std::optional<Model> model_from_name(const std::string& name);
std::string protocol_name(const Protocol& protocol);
// Throws config_error on bad r or an unsupported reveal combination.
void validate_protocol(const Protocol& protocol);
// Accepts the model names above plus "standard" (reveal, r forced to 1),
// "bandit" (r forced to 1), and "cart_weak"; strong flips one-shot models to
// reveal feedback. Throws config_error on unknown names or bad combinations.
Protocol parse_protocol(const std::string& model, int r, bool strong);

struct Query {
  std::vector<int> inputs;                 // all models except comparison
  std::vector<std::pair<int, int>> pairs;  // comparison only
};

struct Guess {
  std::vector<int> values;  // labels, pattern, bits, max value, or rank
  std::vector<int> tokens;  // delayed_relpos below/above calls, 1 = below
};

enum class FeedbackKind { yes, no, reveal };

struct Feedback {
  FeedbackKind kind = FeedbackKind::no;
  std::vector<int> revealed;  // canonical answer, reveal protocols only
};

struct GameView {
  const Protocol& protocol;
  const FunctionFamily& family;
  const std::vector<int>& version_space;
  int round = 1;  // 1-based
  std::mt19937_64* rng = nullptr;
};

class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string name() const = 0;
  virtual void begin(const GameView&) {}
  // One-shot protocols. partial contains the full query.
  virtual Guess guess(const GameView& view, const Query& query);
  // amb: label the latest input in partial.inputs given earlier labels.
  virtual int subround_label(const GameView& view, const Query& partial,
                             const std::vector<int>& labels_so_far);
  // delayed_relpos: partial.inputs = {x, s_1..s_j}; return 1 when the guess is
  // f(s_j) < f(x), else 0.
  virtual int subround_token(const GameView& view, const Query& partial,
                             const std::vector<int>& tokens_so_far);
  virtual void observe(const GameView&, const Query&, const Guess&,
                       const Feedback&) {}
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;
  virtual void begin(const GameView&) {}
  // false ends the run cleanly.
  virtual bool round_available(const GameView& view) = 0;
  virtual Query next_query(const GameView& view);
  virtual int next_amb_input(const GameView& view, const Query& partial,
                             const std::vector<int>& labels_so_far);
  virtual int delayed_x(const GameView& view);
  virtual int next_delayed_element(const GameView& view, const Query& partial,
                                   const std::vector<int>& tokens_so_far);
  virtual Feedback feedback(const GameView& view, const Query& query,
                            const Guess& guess) = 0;
};

struct RoundRecord {
  Query query;
  Guess guess;
  Feedback feedback;
  bool mistake = false;
  std::size_t version_space_size = 0;  // after the round's elimination
};

struct Transcript {
  Protocol protocol;
  std::uint64_t seed = 0;
  std::vector<RoundRecord> rounds;
  long long mistakes = 0;
  std::string fault;  // empty for a clean run
  std::size_t final_version_space_size = 0;

  bool faulted() const { return !fault.empty(); }
};

struct RunOptions {
  std::uint64_t seed = 0;
  long long max_rounds = 100000;
  // Empty means every hypothesis in the family.
  std::vector<int> initial_version_space;
};

// Canonical answer of hypothesis h to a query: the label tuple (cart/amb),
// sort pattern (order), comparison bits, max value (selection), or rank
// (relpos and delayed_relpos, 1 = smallest).
std::vector<int> answer_of(const Protocol& protocol, const FunctionFamily& family,
                           int h, const Query& query);

// The guess in answer form; collapses delayed tokens to 1 + (below count).
std::vector<int> canonical_guess(const Protocol& protocol, const Guess& guess);

// Hypotheses in V whose canonical answer equals answer.
std::vector<int> filter_consistent(const Protocol& protocol,
                                   const FunctionFamily& family,
                                   const std::vector<int>& version_space,
                                   const Query& query,
                                   const std::vector<int>& answer);

// Groups V by canonical answer to the query.
std::map<std::vector<int>, std::vector<int>> partition_by_answer(
    const Protocol& protocol, const FunctionFamily& family,
    const std::vector<int>& version_space, const Query& query);

// Throw query_error / feedback_error explaining the first violation.
void validate_query(const Protocol& protocol, const FunctionFamily& family,
                    const Query& query);
void validate_guess(const Protocol& protocol, const FunctionFamily& family,
                    const Query& query, const Guess& guess);

// True iff the feedback is consistent with at least one hypothesis in V
// (truthfulness); run_game rejects adversaries that violate this.
bool validate_feedback(const Protocol& protocol, const FunctionFamily& family,
                       const std::vector<int>& version_space,
                       const Query& query, const Guess& guess,
                       const Feedback& feedback);

Transcript run_game(const Protocol& protocol, const FunctionFamily& family,
                    Learner& learner, Adversary& adversary,
                    const RunOptions& options);

void write_transcript_csv(std::ostream& os, const Transcript& transcript);

}  // namespace mbl
