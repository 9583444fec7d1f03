#include "mbl/engine.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace mbl {

bool is_one_shot(Model model) {
  return model != Model::amb && model != Model::delayed_relpos;
}

bool is_permutation_model(Model model) {
  switch (model) {
    case Model::order:
    case Model::comparison:
    case Model::selection:
    case Model::relpos:
    case Model::delayed_relpos:
      return true;
    default:
      return false;
  }
}

std::string model_name(Model model) {
  switch (model) {
    case Model::cart: return "cart";
    case Model::amb: return "amb";
    case Model::order: return "order";
    case Model::comparison: return "comparison";
    case Model::selection: return "selection";
    case Model::relpos: return "relpos";
    case Model::delayed_relpos: return "delayed-relpos";
  }
  return "unknown";
}

std::optional<Model> model_from_name(const std::string& name) {
  for (Model m : {Model::cart, Model::amb, Model::order, Model::comparison,
                  Model::selection, Model::relpos, Model::delayed_relpos})
    if (model_name(m) == name) return m;
  return std::nullopt;
}

std::string protocol_name(const Protocol& protocol) {
  std::ostringstream os;
  os << model_name(protocol.model) << "[r=" << protocol.r << ','
     << (protocol.reveal ? "reveal" : "bandit") << ']';
  return os.str();
}

void validate_protocol(const Protocol& protocol) {
  if (protocol.r < 1) throw config_error("protocol needs r >= 1");
  if (protocol.reveal && !is_one_shot(protocol.model))
    throw config_error("reveal feedback is only defined for one-shot protocols");
}

Protocol parse_protocol(const std::string& model, int r, bool strong) {
  Protocol protocol;
  if (model == "standard" || model == "bandit") {
    if (r != 1)
      throw config_error(model + " is a single-input protocol (r must be 1)");
    protocol.model = Model::cart;
    protocol.r = 1;
    protocol.reveal = (model == "standard") || strong;
  } else {
    auto m = model_from_name(model == "cart_weak" ? "cart" : model);
    if (!m) throw config_error("unknown model: " + model);
    protocol.model = *m;
    protocol.r = r;
    protocol.reveal = strong;
  }
  validate_protocol(protocol);
  return protocol;
}

Guess Learner::guess(const GameView&, const Query&) {
  throw config_error(name() + " does not handle one-shot protocols");
}

int Learner::subround_label(const GameView&, const Query&,
                            const std::vector<int>&) {
  throw config_error(name() + " does not handle amb subrounds");
}

int Learner::subround_token(const GameView&, const Query&,
                            const std::vector<int>&) {
  throw config_error(name() + " does not handle delayed subrounds");
}

Query Adversary::next_query(const GameView&) {
  throw config_error(name() + " does not handle one-shot protocols");
}

int Adversary::next_amb_input(const GameView&, const Query&,
                              const std::vector<int>&) {
  throw config_error(name() + " does not handle amb subrounds");
}

int Adversary::delayed_x(const GameView&) {
  throw config_error(name() + " does not handle delayed subrounds");
}

int Adversary::next_delayed_element(const GameView&, const Query&,
                                    const std::vector<int>&) {
  throw config_error(name() + " does not handle delayed subrounds");
}

std::vector<int> answer_of(const Protocol& protocol, const FunctionFamily& family,
                           int h, const Query& query) {
  switch (protocol.model) {
    case Model::cart:
    case Model::amb: {
      std::vector<int> labels;
      labels.reserve(query.inputs.size());
      for (int x : query.inputs) labels.push_back(family.eval(h, x));
      return labels;
    }
    case Model::order: {
      std::vector<int> values;
      values.reserve(query.inputs.size());
      for (int x : query.inputs) values.push_back(family.eval(h, x));
      return pattern_of(values);
    }
    case Model::comparison: {
      std::vector<int> bits;
      bits.reserve(query.pairs.size());
      for (const auto& [a, b] : query.pairs)
        bits.push_back(family.eval(h, a) < family.eval(h, b) ? 1 : 0);
      return bits;
    }
    case Model::selection: {
      // Guessing is by input value: the answer names the queried input whose
      // label is largest (duplicates collapse; permutation rows break ties).
      int best_input = query.inputs.front();
      for (int x : query.inputs)
        if (family.eval(h, x) > family.eval(h, best_input)) best_input = x;
      return {best_input};
    }
    case Model::relpos:
    case Model::delayed_relpos: {
      int fx = family.eval(h, query.inputs.front());
      int below = 0;
      for (std::size_t i = 1; i < query.inputs.size(); ++i)
        if (family.eval(h, query.inputs[i]) < fx) ++below;
      return {1 + below};
    }
  }
  throw config_error("unknown model");
}

std::vector<int> canonical_guess(const Protocol& protocol, const Guess& guess) {
  if (protocol.model == Model::delayed_relpos) {
    int below = 0;
    for (int t : guess.tokens)
      if (t == 1) ++below;
    return {1 + below};
  }
  return guess.values;
}

std::vector<int> filter_consistent(const Protocol& protocol,
                                   const FunctionFamily& family,
                                   const std::vector<int>& version_space,
                                   const Query& query,
                                   const std::vector<int>& answer) {
  std::vector<int> keep;
  for (int h : version_space)
    if (answer_of(protocol, family, h, query) == answer) keep.push_back(h);
  return keep;
}

std::map<std::vector<int>, std::vector<int>> partition_by_answer(
    const Protocol& protocol, const FunctionFamily& family,
    const std::vector<int>& version_space, const Query& query) {
  std::map<std::vector<int>, std::vector<int>> parts;
  for (int h : version_space)
    parts[answer_of(protocol, family, h, query)].push_back(h);
  return parts;
}

namespace {

void require_inputs_in_range(const FunctionFamily& family,
                             const std::vector<int>& inputs) {
  for (int x : inputs)
    if (x < 1 || x > family.domain_size())
      throw query_error("query input out of domain range");
}

void require_distinct(const std::vector<int>& inputs, const char* what) {
  std::set<int> seen(inputs.begin(), inputs.end());
  if (seen.size() != inputs.size())
    throw query_error(std::string(what) + " must be pairwise distinct");
}

}  // namespace

void validate_query(const Protocol& protocol, const FunctionFamily& family,
                    const Query& query) {
  const int r = protocol.r;
  switch (protocol.model) {
    case Model::cart:
    case Model::amb:
      if (static_cast<int>(query.inputs.size()) != r)
        throw query_error("query must carry exactly r inputs");
      require_inputs_in_range(family, query.inputs);
      break;
    case Model::order:
      if (static_cast<int>(query.inputs.size()) != r)
        throw query_error("query must carry exactly r inputs");
      require_inputs_in_range(family, query.inputs);
      for (std::size_t i = 1; i < query.inputs.size(); ++i)
        if (query.inputs[i - 1] >= query.inputs[i])
          throw query_error("order queries list inputs in increasing order");
      break;
    case Model::comparison:
      if (static_cast<int>(query.pairs.size()) != r)
        throw query_error("query must carry exactly r pairs");
      for (const auto& [a, b] : query.pairs) {
        if (a < 1 || a > family.domain_size() || b < 1 || b > family.domain_size())
          throw query_error("query input out of domain range");
        if (a == b) throw query_error("comparison pairs need distinct inputs");
      }
      break;
    case Model::selection:
      // Duplicates are allowed; they are how sets smaller than r are asked.
      if (static_cast<int>(query.inputs.size()) != r)
        throw query_error("query must carry exactly r inputs");
      require_inputs_in_range(family, query.inputs);
      break;
    case Model::relpos:
    case Model::delayed_relpos:
      if (static_cast<int>(query.inputs.size()) != r + 1)
        throw query_error("query must carry x plus r comparison elements");
      require_inputs_in_range(family, query.inputs);
      require_distinct(query.inputs, "rank query inputs");
      break;
  }
  if (protocol.model == Model::comparison) {
    if (!query.inputs.empty())
      throw query_error("comparison queries use pairs, not inputs");
  } else if (!query.pairs.empty()) {
    throw query_error("only comparison queries use pairs");
  }
}

void validate_guess(const Protocol& protocol, const FunctionFamily& family,
                    const Query& query, const Guess& guess) {
  const int r = protocol.r;
  switch (protocol.model) {
    case Model::cart:
    case Model::amb:
      if (static_cast<int>(guess.values.size()) != r)
        throw feedback_error("guess must carry exactly r labels");
      for (int v : guess.values)
        if (v < 0 || v >= family.label_count())
          throw feedback_error("guessed label out of range");
      break;
    case Model::order: {
      if (static_cast<int>(guess.values.size()) != r)
        throw feedback_error("guess must be a pattern of length r");
      std::vector<int> sorted = guess.values;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < r; ++i)
        if (sorted[i] != i + 1)
          throw feedback_error("guess must be a permutation of 1..r");
      break;
    }
    case Model::comparison:
      if (static_cast<int>(guess.values.size()) != r)
        throw feedback_error("guess must carry exactly r bits");
      for (int v : guess.values)
        if (v != 0 && v != 1) throw feedback_error("comparison bits must be 0 or 1");
      break;
    case Model::selection: {
      if (guess.values.size() != 1)
        throw feedback_error("guess must name a single queried input");
      bool queried = std::find(query.inputs.begin(), query.inputs.end(),
                               guess.values[0]) != query.inputs.end();
      if (!queried)
        throw feedback_error("guess must name one of the queried inputs");
      break;
    }
    case Model::relpos:
      if (guess.values.size() != 1)
        throw feedback_error("guess must be a single rank");
      if (guess.values[0] < 1 || guess.values[0] > r + 1)
        throw feedback_error("guessed rank out of range");
      break;
    case Model::delayed_relpos:
      if (!guess.values.empty())
        throw feedback_error("delayed guesses are carried by tokens");
      if (static_cast<int>(guess.tokens.size()) != r)
        throw feedback_error("guess must carry exactly r tokens");
      for (int t : guess.tokens)
        if (t != 0 && t != 1) throw feedback_error("tokens must be 0 or 1");
      break;
  }
  if (protocol.model != Model::delayed_relpos && !guess.tokens.empty())
    throw feedback_error("only delayed guesses carry tokens");
}

namespace {

std::vector<int> filter_disagreeing(const Protocol& protocol,
                                    const FunctionFamily& family,
                                    const std::vector<int>& version_space,
                                    const Query& query,
                                    const std::vector<int>& answer) {
  std::vector<int> keep;
  for (int h : version_space)
    if (answer_of(protocol, family, h, query) != answer) keep.push_back(h);
  return keep;
}

}  // namespace

bool validate_feedback(const Protocol& protocol, const FunctionFamily& family,
                       const std::vector<int>& version_space,
                       const Query& query, const Guess& guess,
                       const Feedback& feedback) {
  if (protocol.reveal != (feedback.kind == FeedbackKind::reveal)) return false;
  if (feedback.kind == FeedbackKind::reveal)
    return !filter_consistent(protocol, family, version_space, query,
                              feedback.revealed)
                .empty();
  auto answer = canonical_guess(protocol, guess);
  if (feedback.kind == FeedbackKind::yes)
    return !filter_consistent(protocol, family, version_space, query, answer)
                .empty();
  return !filter_disagreeing(protocol, family, version_space, query, answer)
              .empty();
}

Transcript run_game(const Protocol& protocol, const FunctionFamily& family,
                    Learner& learner, Adversary& adversary,
                    const RunOptions& options) {
  validate_protocol(protocol);
  if (is_permutation_model(protocol.model) && !family.rows_are_permutations())
    throw config_error(protocol_name(protocol) +
                       " needs a family of permutations");
  const long long X = family.domain_size();
  if (protocol.model == Model::order && protocol.r > X)
    throw config_error("order protocol needs r <= |X|");
  if ((protocol.model == Model::relpos ||
       protocol.model == Model::delayed_relpos) &&
      protocol.r + 1 > X)
    throw config_error("rank protocols need r + 1 <= |X|");
  if (protocol.model == Model::comparison && protocol.r > X * (X - 1))
    throw config_error("comparison protocol needs r <= |X|(|X|-1) pairs");
  std::vector<int> V = options.initial_version_space;
  if (V.empty()) {
    V.resize(family.size());
    std::iota(V.begin(), V.end(), 0);
  } else {
    for (int h : V)
      if (h < 0 || h >= static_cast<int>(family.size()))
        throw config_error("initial version space index out of range");
  }

  std::mt19937_64 rng(options.seed);
  Transcript transcript;
  transcript.protocol = protocol;
  transcript.seed = options.seed;
  GameView view{protocol, family, V, 1, &rng};
  learner.begin(view);
  adversary.begin(view);

  auto record_fault = [&](std::string msg, Query query, Guess guess) {
    transcript.rounds.push_back(
        {std::move(query), std::move(guess), Feedback{}, false, V.size()});
    transcript.fault = std::move(msg);
  };

  for (long long round = 1; round <= options.max_rounds; ++round) {
    view.round = static_cast<int>(round);
    if (!adversary.round_available(view)) break;

    Query query;
    Guess guess;
    if (is_one_shot(protocol.model)) {
      query = adversary.next_query(view);
      try {
        validate_query(protocol, family, query);
      } catch (const query_error& e) {
        record_fault(std::string("adversary-fault: ") + e.what(), query, guess);
        break;
      }
      guess = learner.guess(view, query);
      try {
        validate_guess(protocol, family, query, guess);
      } catch (const feedback_error& e) {
        record_fault(std::string("learner-fault: ") + e.what(), query, guess);
        break;
      }
    } else if (protocol.model == Model::amb) {
      bool faulted = false;
      for (int j = 0; j < protocol.r && !faulted; ++j) {
        int x = adversary.next_amb_input(view, query, guess.values);
        if (x < 1 || x > family.domain_size()) {
          record_fault("adversary-fault: subround input out of range", query,
                       guess);
          faulted = true;
          break;
        }
        query.inputs.push_back(x);
        int label = learner.subround_label(view, query, guess.values);
        if (label < 0 || label >= family.label_count()) {
          record_fault("learner-fault: subround label out of range", query,
                       guess);
          faulted = true;
          break;
        }
        guess.values.push_back(label);
      }
      if (faulted) break;
    } else {  // delayed_relpos
      int x = adversary.delayed_x(view);
      if (x < 1 || x > family.domain_size()) {
        record_fault("adversary-fault: x out of range", query, guess);
        break;
      }
      query.inputs.push_back(x);
      bool faulted = false;
      for (int j = 0; j < protocol.r && !faulted; ++j) {
        int elem = adversary.next_delayed_element(view, query, guess.tokens);
        bool repeated =
            std::find(query.inputs.begin(), query.inputs.end(), elem) !=
            query.inputs.end();
        if (elem < 1 || elem > family.domain_size() || repeated) {
          record_fault("adversary-fault: comparison element invalid", query,
                       guess);
          faulted = true;
          break;
        }
        query.inputs.push_back(elem);
        int token = learner.subround_token(view, query, guess.tokens);
        if (token != 0 && token != 1) {
          record_fault("learner-fault: token must be 0 or 1", query, guess);
          faulted = true;
          break;
        }
        guess.tokens.push_back(token);
      }
      if (faulted) break;
    }

    Feedback fb = adversary.feedback(view, query, guess);
    bool mistake = false;
    if (protocol.reveal) {
      if (fb.kind != FeedbackKind::reveal) {
        record_fault("adversary-fault: reveal protocol expects a revealed answer",
                     query, guess);
        break;
      }
      auto keep = filter_consistent(protocol, family, V, query, fb.revealed);
      if (keep.empty()) {
        record_fault("adversary-fault: revealed answer has no surviving hypothesis",
                     query, guess);
        break;
      }
      mistake = canonical_guess(protocol, guess) != fb.revealed;
      V = std::move(keep);
    } else {
      if (fb.kind == FeedbackKind::reveal) {
        record_fault("adversary-fault: bandit protocol got a revealed answer",
                     query, guess);
        break;
      }
      auto answer = canonical_guess(protocol, guess);
      if (fb.kind == FeedbackKind::yes) {
        auto keep = filter_consistent(protocol, family, V, query, answer);
        if (keep.empty()) {
          record_fault("adversary-fault: yes with no agreeing hypothesis", query,
                       guess);
          break;
        }
        V = std::move(keep);
      } else {
        auto keep = filter_disagreeing(protocol, family, V, query, answer);
        if (keep.empty()) {
          record_fault("adversary-fault: no while every hypothesis agrees",
                       query, guess);
          break;
        }
        V = std::move(keep);
        mistake = true;
      }
    }

    transcript.rounds.push_back({query, guess, fb, mistake, V.size()});
    if (mistake) ++transcript.mistakes;
    learner.observe(view, query, guess, fb);
  }

  transcript.final_version_space_size = V.size();
  return transcript;
}

namespace {

void write_joined(std::ostream& os, const std::vector<int>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ';';
    os << values[i];
  }
}

}  // namespace

void write_transcript_csv(std::ostream& os, const Transcript& transcript) {
  os << "# mbl-csv v1\n";
  os << "round,query,guess,feedback,mistake,version_space_size\n";
  int round = 1;
  for (const auto& rec : transcript.rounds) {
    os << round++ << ',';
    if (!rec.query.pairs.empty()) {
      for (std::size_t i = 0; i < rec.query.pairs.size(); ++i) {
        if (i) os << ';';
        os << rec.query.pairs[i].first << ':' << rec.query.pairs[i].second;
      }
    } else {
      write_joined(os, rec.query.inputs);
    }
    os << ',';
    if (!rec.guess.tokens.empty())
      write_joined(os, rec.guess.tokens);
    else
      write_joined(os, rec.guess.values);
    os << ',';
    switch (rec.feedback.kind) {
      case FeedbackKind::yes: os << "yes"; break;
      case FeedbackKind::no: os << "no"; break;
      case FeedbackKind::reveal:
        os << "reveal:";
        write_joined(os, rec.feedback.revealed);
        break;
    }
    os << ',' << (rec.mistake ? 1 : 0) << ',' << rec.version_space_size << '\n';
  }
  if (transcript.faulted()) os << "# fault: " << transcript.fault << '\n';
}

}  // namespace mbl
