//
// Copyright 2026 The unlearnaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "unlearnaudit/compliance.h"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "status_macros.h"
#include "unlearnaudit/games.h"
#include "unlearnaudit/random.h"

namespace unlearnaudit {

namespace {

absl::Status BudgetViolation(std::string_view what) {
  return absl::FailedPreconditionError(
      absl::StrCat("BudgetViolation: ", AsAbsl(what)));
}

absl::Status ConfigInvalid(std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("ConfigInvalid: ", AsAbsl(what)));
}

absl::Status Malformed(std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("MalformedMessage: ", AsAbsl(what)));
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

const char* VerbName(MessageKind kind) {
  switch (kind) {
    case MessageKind::kAdd:
      return "ADD";
    case MessageKind::kDel:
      return "DEL";
    case MessageKind::kEval:
      return "EVAL";
    case MessageKind::kAck:
      return "ACK";
    case MessageKind::kRefused:
      return "REFUSED";
    case MessageKind::kPrediction:
      return "PRED";
  }
  return "?";
}

void AppendInstance(const Instance& x, std::vector<std::string>& out) {
  if (x.kind() == InstanceKind::kTokens) {
    out.push_back(x.is_fragment() ? "fragment" : "sentence");
    out.push_back(absl::StrCat(x.tokens().size()));
    for (TokenId t : x.tokens()) out.push_back(absl::StrCat(t));
    return;
  }
  out.push_back(x.kind() == InstanceKind::kBinary ? "binary" : "dense");
  out.push_back(absl::StrCat(x.coords().size()));
  for (double c : x.coords()) out.push_back(FormatDouble(c));
}

void AppendLabel(const Label& y, std::vector<std::string>& out) {
  switch (y.kind) {
    case LabelKind::kReal:
      out.push_back("real");
      out.push_back(FormatDouble(y.value));
      return;
    case LabelKind::kClass:
      out.push_back("class");
      out.push_back(absl::StrCat(y.class_id));
      return;
    case LabelKind::kSequenceProb:
      out.push_back("seqprob");
      out.push_back(FormatDouble(y.value));
      return;
  }
}

void AppendPrediction(const Prediction& p, std::vector<std::string>& out) {
  switch (p.kind) {
    case PredictionKind::kRealValue:
      out.push_back("real");
      out.push_back(FormatDouble(p.value));
      return;
    case PredictionKind::kSequenceProb:
      out.push_back("seqprob");
      out.push_back(FormatDouble(p.value));
      return;
    case PredictionKind::kClassDistribution:
      out.push_back("dist");
      out.push_back(absl::StrCat(p.distribution.size()));
      for (double v : p.distribution) out.push_back(FormatDouble(v));
      return;
  }
}

// Sequential reader over whitespace-separated fields.
class Fields {
 public:
  explicit Fields(std::vector<std::string> f) : f_(std::move(f)) {}

  bool done() const { return pos_ == f_.size(); }

  absl::StatusOr<std::string> Word() {
    if (done()) return Malformed("truncated line");
    return f_[pos_++];
  }
  absl::StatusOr<double> Double() {
    UA_ASSIGN(w, Word());
    double v = 0.0;
    auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || end != w.data() + w.size()) {
      return Malformed(absl::StrCat("bad number '", w, "'"));
    }
    return v;
  }
  absl::StatusOr<int64_t> Int() {
    UA_ASSIGN(w, Word());
    int64_t v = 0;
    auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || end != w.data() + w.size()) {
      return Malformed(absl::StrCat("bad integer '", w, "'"));
    }
    return v;
  }
  absl::StatusOr<size_t> Count() {
    UA_ASSIGN(v, Int());
    if (v < 0 || static_cast<size_t>(v) > f_.size() - pos_) {
      return Malformed("bad length");
    }
    return static_cast<size_t>(v);
  }

 private:
  std::vector<std::string> f_;
  size_t pos_ = 0;
};

absl::StatusOr<Instance> ReadInstance(Fields& f) {
  UA_ASSIGN(kind, f.Word());
  UA_ASSIGN(len, f.Count());
  if (kind == "sentence" || kind == "fragment") {
    std::vector<TokenId> tokens(len);
    for (size_t i = 0; i < len; ++i) {
      UA_ASSIGN(t, f.Int());
      tokens[i] = static_cast<TokenId>(t);
    }
    return kind == "sentence" ? Instance::Sentence(std::move(tokens))
                              : Instance::Fragment(std::move(tokens));
  }
  if (kind != "dense" && kind != "binary") {
    return Malformed(absl::StrCat("unknown instance kind '", kind, "'"));
  }
  std::vector<double> coords(len);
  for (size_t i = 0; i < len; ++i) {
    UA_ASSIGN(c, f.Double());
    coords[i] = c;
  }
  if (kind == "dense") return Instance::Dense(std::move(coords));
  for (double c : coords) {
    if (c != 0.0 && c != 1.0) return Malformed("binary coordinate not 0/1");
  }
  return Instance::BinaryUnchecked(std::move(coords));
}

absl::StatusOr<Label> ReadLabel(Fields& f) {
  UA_ASSIGN(kind, f.Word());
  if (kind == "class") {
    UA_ASSIGN(id, f.Int());
    return Label::Class(static_cast<int>(id));
  }
  UA_ASSIGN(v, f.Double());
  if (kind == "real") return Label::Real(v);
  if (kind == "seqprob") return Label::SequenceProb(v);
  return Malformed(absl::StrCat("unknown label kind '", kind, "'"));
}

absl::StatusOr<Prediction> ReadPrediction(Fields& f) {
  UA_ASSIGN(kind, f.Word());
  if (kind == "dist") {
    UA_ASSIGN(len, f.Count());
    std::vector<double> probs(len);
    for (size_t i = 0; i < len; ++i) {
      UA_ASSIGN(p, f.Double());
      probs[i] = p;
    }
    return Prediction::Distribution(std::move(probs));
  }
  UA_ASSIGN(v, f.Double());
  if (kind == "real") return Prediction::RealValue(v);
  if (kind == "seqprob") return Prediction::SequenceProb(v);
  return Malformed(absl::StrCat("unknown prediction kind '", kind, "'"));
}

constexpr RefusalReason kAllReasons[] = {
    RefusalReason::kNotServing,      RefusalReason::kCollectionClosed,
    RefusalReason::kBudgetExhausted, RefusalReason::kKindMismatch,
    RefusalReason::kTrainingFailed,  RefusalReason::kNotARequest};

// Trains on a seeded permutation of the stored examples.
absl::StatusOr<ModelPtr> PermuteAndTrain(const std::vector<Example>& stored,
                                         const LearnerSpec& spec, uint64_t seed,
                                         int round) {
  Dataset s;
  s.examples = stored;
  Rng rng(DatColShuffleSeed(seed, round));
  rng.Shuffle(s.examples);
  return Train(spec, s, DatColTrainSeed(seed, round));
}

}  // namespace

const char* RefusalReasonName(RefusalReason reason) {
  switch (reason) {
    case RefusalReason::kNotServing:
      return "not_serving";
    case RefusalReason::kCollectionClosed:
      return "collection_closed";
    case RefusalReason::kBudgetExhausted:
      return "budget_exhausted";
    case RefusalReason::kKindMismatch:
      return "kind_mismatch";
    case RefusalReason::kTrainingFailed:
      return "training_failed";
    case RefusalReason::kNotARequest:
      return "not_a_request";
  }
  return "unknown";
}

ProtocolMessage ProtocolMessage::Add(Example e) {
  ProtocolMessage m;
  m.kind = MessageKind::kAdd;
  m.example = std::move(e);
  return m;
}

ProtocolMessage ProtocolMessage::Del(Example e) {
  ProtocolMessage m;
  m.kind = MessageKind::kDel;
  m.example = std::move(e);
  return m;
}

ProtocolMessage ProtocolMessage::Eval(Instance x) {
  ProtocolMessage m;
  m.kind = MessageKind::kEval;
  m.instance = std::move(x);
  return m;
}

ProtocolMessage ProtocolMessage::Ack() { return ProtocolMessage(); }

ProtocolMessage ProtocolMessage::Refused(RefusalReason reason) {
  ProtocolMessage m;
  m.kind = MessageKind::kRefused;
  m.reason = reason;
  return m;
}

ProtocolMessage ProtocolMessage::Predicted(Prediction p) {
  ProtocolMessage m;
  m.kind = MessageKind::kPrediction;
  m.prediction = std::move(p);
  return m;
}

bool operator==(const ProtocolMessage& a, const ProtocolMessage& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case MessageKind::kAdd:
    case MessageKind::kDel:
      return a.example == b.example;
    case MessageKind::kEval:
      return a.instance == b.instance;
    case MessageKind::kAck:
      return true;
    case MessageKind::kRefused:
      return a.reason == b.reason;
    case MessageKind::kPrediction:
      return a.prediction == b.prediction;
  }
  return false;
}

std::string EncodeMessage(const ProtocolMessage& msg) {
  std::vector<std::string> f = {std::string(kProtocolVersion),
                                VerbName(msg.kind)};
  switch (msg.kind) {
    case MessageKind::kAdd:
    case MessageKind::kDel:
      AppendInstance(msg.example.instance, f);
      AppendLabel(msg.example.label, f);
      break;
    case MessageKind::kEval:
      AppendInstance(msg.instance, f);
      break;
    case MessageKind::kAck:
      break;
    case MessageKind::kRefused:
      f.push_back(RefusalReasonName(msg.reason));
      break;
    case MessageKind::kPrediction:
      AppendPrediction(msg.prediction, f);
      break;
  }
  return absl::StrJoin(f, " ");
}

absl::StatusOr<ProtocolMessage> DecodeMessage(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
    line.remove_suffix(1);
  }
  Fields f(absl::StrSplit(AsAbsl(line), ' ', absl::SkipEmpty()));
  UA_ASSIGN(version, f.Word());
  if (version != kProtocolVersion) {
    return Malformed(absl::StrCat("unsupported version '", version, "'"));
  }
  UA_ASSIGN(verb, f.Word());
  ProtocolMessage m;
  if (verb == "ADD" || verb == "DEL") {
    m.kind = verb == "ADD" ? MessageKind::kAdd : MessageKind::kDel;
    UA_ASSIGN(x, ReadInstance(f));
    UA_ASSIGN(y, ReadLabel(f));
    m.example = {std::move(x), y};
  } else if (verb == "EVAL") {
    m.kind = MessageKind::kEval;
    UA_ASSIGN(x, ReadInstance(f));
    m.instance = std::move(x);
  } else if (verb == "ACK") {
    m.kind = MessageKind::kAck;
  } else if (verb == "REFUSED") {
    m.kind = MessageKind::kRefused;
    UA_ASSIGN(name, f.Word());
    bool found = false;
    for (RefusalReason r : kAllReasons) {
      if (name == RefusalReasonName(r)) {
        m.reason = r;
        found = true;
      }
    }
    if (!found) return Malformed(absl::StrCat("unknown reason '", name, "'"));
  } else if (verb == "PRED") {
    m.kind = MessageKind::kPrediction;
    UA_ASSIGN(p, ReadPrediction(f));
    m.prediction = std::move(p);
  } else {
    return Malformed(absl::StrCat("unknown verb '", verb, "'"));
  }
  if (!f.done()) return Malformed("trailing fields");
  return m;
}

const char* DatColPhaseName(DatColPhase phase) {
  switch (phase) {
    case DatColPhase::kCollecting:
      return "collecting";
    case DatColPhase::kServing:
      return "serving";
    case DatColPhase::kPostDeletion:
      return "post_deletion";
  }
  return "unknown";
}

DatColState NewDatCol(int capacity, int budget) {
  DatColState s;
  s.capacity = capacity;
  s.budget = budget;
  return s;
}

uint64_t DatColTrainSeed(uint64_t seed, int round) {
  return DeriveSeed(seed, static_cast<uint64_t>(round), "datcol_train");
}

uint64_t DatColShuffleSeed(uint64_t seed, int round) {
  return DeriveSeed(seed, static_cast<uint64_t>(round), "datcol_shuffle");
}

ProtocolMessage DatColStep(DatColState& state, const ProtocolMessage& msg,
                           const LearnerSpec& spec, uint64_t seed) {
  switch (msg.kind) {
    case MessageKind::kAdd: {
      if (state.phase != DatColPhase::kCollecting) {
        return ProtocolMessage::Refused(RefusalReason::kCollectionClosed);
      }
      state.stored.push_back(msg.example);
      if (static_cast<int>(state.stored.size()) >= state.capacity) {
        state.phase = DatColPhase::kServing;
        auto model = PermuteAndTrain(state.stored, spec, seed, 0);
        state.model = model.ok() ? *model : nullptr;
      }
      return ProtocolMessage::Ack();
    }
    case MessageKind::kEval: {
      if (state.phase == DatColPhase::kCollecting) {
        return ProtocolMessage::Refused(RefusalReason::kNotServing);
      }
      if (state.model == nullptr) {
        return ProtocolMessage::Refused(RefusalReason::kTrainingFailed);
      }
      if (msg.instance.kind() != state.model->instance_kind()) {
        return ProtocolMessage::Refused(RefusalReason::kKindMismatch);
      }
      auto p = state.model->Predict(msg.instance);
      if (!p.ok())
        return ProtocolMessage::Refused(RefusalReason::kKindMismatch);
      return ProtocolMessage::Predicted(*std::move(p));
    }
    case MessageKind::kDel: {
      if (state.phase == DatColPhase::kCollecting) {
        return ProtocolMessage::Refused(RefusalReason::kNotServing);
      }
      if (state.deletions_used >= state.budget) {
        return ProtocolMessage::Refused(RefusalReason::kBudgetExhausted);
      }
      for (auto it = state.stored.begin(); it != state.stored.end(); ++it) {
        if (*it == msg.example) {
          state.stored.erase(it);
          break;
        }
      }
      ++state.deletions_used;
      state.phase = DatColPhase::kPostDeletion;
      auto model =
          PermuteAndTrain(state.stored, spec, seed, state.deletions_used);
      state.model = model.ok() ? *model : nullptr;
      return ProtocolMessage::Ack();
    }
    case MessageKind::kAck:
    case MessageKind::kRefused:
    case MessageKind::kPrediction:
      break;
  }
  return ProtocolMessage::Refused(RefusalReason::kNotARequest);
}

namespace {

class HonestCollector : public DataCollector {
 public:
  HonestCollector(const LearnerSpec& spec, int capacity, int budget,
                  uint64_t seed)
      : spec_(spec), seed_(seed), state_(NewDatCol(capacity, budget)) {}

  ProtocolMessage Handle(const ProtocolMessage& msg) override {
    return DatColStep(state_, msg, spec_, seed_);
  }

 protected:
  LearnerSpec spec_;
  uint64_t seed_;
  DatColState state_;
};

class IgnoringCollector : public HonestCollector {
 public:
  using HonestCollector::HonestCollector;

  ProtocolMessage Handle(const ProtocolMessage& msg) override {
    if (msg.kind == MessageKind::kDel &&
        state_.phase != DatColPhase::kCollecting &&
        state_.deletions_used < state_.budget) {
      ++state_.deletions_used;
      state_.phase = DatColPhase::kPostDeletion;
      return ProtocolMessage::Ack();
    }
    return HonestCollector::Handle(msg);
  }
};

class LeakyCollector : public HonestCollector {
 public:
  using HonestCollector::HonestCollector;

  ProtocolMessage Handle(const ProtocolMessage& msg) override {
    ProtocolMessage r = HonestCollector::Handle(msg);
    if (msg.kind == MessageKind::kDel && r.kind == MessageKind::kAck) {
      const Label& y = msg.example.label;
      last_deleted_ = y.kind == LabelKind::kClass ? y.class_id : y.value;
      leaked_ = true;
    }
    if (msg.kind == MessageKind::kEval && leaked_ &&
        r.kind == MessageKind::kPrediction) {
      return ProtocolMessage::Predicted(Prediction::RealValue(last_deleted_));
    }
    return r;
  }

 private:
  bool leaked_ = false;
  double last_deleted_ = 0.0;
};

}  // namespace

std::unique_ptr<DataCollector> MakeHonestCollector(const LearnerSpec& spec,
                                                   int capacity, int budget,
                                                   uint64_t seed) {
  return std::make_unique<HonestCollector>(spec, capacity, budget, seed);
}

std::unique_ptr<DataCollector> MakeIgnoringCollector(const LearnerSpec& spec,
                                                     int capacity, int budget,
                                                     uint64_t seed) {
  return std::make_unique<IgnoringCollector>(spec, capacity, budget, seed);
}

std::unique_ptr<DataCollector> MakeLeakyCollector(const LearnerSpec& spec,
                                                  int capacity, int budget,
                                                  uint64_t seed) {
  return std::make_unique<LeakyCollector>(spec, capacity, budget, seed);
}

absl::Status ServeStream(DataCollector& collector, std::istream& in,
                         std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto msg = DecodeMessage(line);
    if (!msg.ok()) {
      out << kProtocolVersion << " ERROR " << msg.status().message() << "\n";
      continue;
    }
    out << EncodeMessage(collector.Handle(*msg)) << "\n";
  }
  if (in.bad()) return absl::DataLossError("stream read failed");
  return absl::OkStatus();
}

Session::Session(DataCollector& collector, int capacity, int budget, int world)
    : collector_(collector),
      capacity_(capacity),
      budget_(budget),
      world_(world) {}

absl::StatusOr<ProtocolMessage> Session::Send(const ProtocolMessage& msg) {
  if (msg.kind == MessageKind::kDel) {
    if (own_deletions_ >= budget_ - 1) {
      return BudgetViolation(
          absl::StrCat("env may issue at most ", budget_ - 1, " deletions"));
    }
    ++own_deletions_;
  }
  ++steps_;
  return collector_.Handle(msg);
}

absl::Status Session::RequesterAdd(const Example& e0, const Example& e1) {
  if (!pair_.empty()) {
    return absl::FailedPreconditionError("requester already holds a pair");
  }
  pair_ = {e0, e1};
  for (const Example& e : pair_) {
    ++steps_;
    ProtocolMessage r = collector_.Handle(ProtocolMessage::Add(e));
    if (r.kind == MessageKind::kRefused) {
      return absl::FailedPreconditionError(absl::StrCat(
          "Refused: requester Add (", RefusalReasonName(r.reason), ")"));
    }
  }
  return absl::OkStatus();
}

absl::Status Session::RequesterDelete() {
  if (pair_.empty()) {
    return absl::FailedPreconditionError("requester has no pair");
  }
  if (trigger_step_ >= 0) {
    return absl::FailedPreconditionError("requester already deleted");
  }
  trigger_step_ = steps_++;
  ProtocolMessage r = collector_.Handle(ProtocolMessage::Del(pair_[world_]));
  if (r.kind == MessageKind::kRefused) {
    return absl::FailedPreconditionError(absl::StrCat(
        "Refused: requester Del (", RefusalReasonName(r.reason), ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<ComplianceStats> RunCompliance(const ComplianceConfig& config,
                                              const Environment& env) {
  if (config.capacity < 2) return ConfigInvalid("n must be >= 2");
  if (config.budget < 1) return ConfigInvalid("k must be >= 1");
  if (config.sessions < 2) return ConfigInvalid("sessions must be >= 2");
  if (!env) return ConfigInvalid("environment missing");
  UA_RETURN_IF_ERROR(ValidateSpec(config.learner));
  const CollectorFactory factory = config.collector
                                       ? config.collector
                                       : CollectorFactory(MakeHonestCollector);

  std::vector<WorldOutcome> rows(config.sessions);
  auto run_session = [&](int64_t s) -> absl::Status {
    const int world = static_cast<int>(s % 2);
    auto collector = factory(config.learner, config.capacity, config.budget,
                             DeriveSeed(config.seed, s, "collector"));
    Session session(*collector, config.capacity, config.budget, world);
    UA_ASSIGN(guess, env(session, DeriveSeed(config.seed, s, "env")));
    if (guess != 0 && guess != 1) {
      return absl::InvalidArgumentError("env guess must be 0 or 1");
    }
    if (session.own_deletions() > config.budget - 1) {
      return BudgetViolation("env exceeded its deletion budget");
    }
    rows[s] = {s, world, guess, session.trigger_step()};
    return absl::OkStatus();
  };
  UA_RETURN_IF_ERROR(ParallelFor(config.sessions, config.workers, run_session));

  ComplianceStats st;
  st.sessions = config.sessions;
  for (const WorldOutcome& r : rows) {
    if (r.world == 0) {
      ++st.world0;
      st.ones_world0 += r.guess;
    } else {
      ++st.world1;
      st.ones_world1 += r.guess;
    }
  }
  st.p0 = static_cast<double>(st.ones_world0) / st.world0;
  st.p1 = static_cast<double>(st.ones_world1) / st.world1;
  std::tie(st.ci0_low, st.ci0_high) = WilsonInterval(st.ones_world0, st.world0);
  std::tie(st.ci1_low, st.ci1_high) = WilsonInterval(st.ones_world1, st.world1);
  st.signed_advantage = st.p1 - st.p0;
  st.advantage = std::abs(st.signed_advantage);
  const double se0 = BinomialStandardError(st.p0, st.world0);
  const double se1 = BinomialStandardError(st.p1, st.world1);
  st.standard_error = std::sqrt(se0 * se0 + se1 * se1);
  st.ci_width = 2.0 * 1.959963984540054 * st.standard_error;
  st.rows = std::move(rows);
  return st;
}

Environment MakeCoinEnv() {
  return [](Session&, uint64_t seed) -> absl::StatusOr<int> {
    Rng rng(seed);
    return rng.Bit();
  };
}

namespace {

// Model view backed by Eval messages of one session.
class EvalModel : public Model {
 public:
  EvalModel(Session* session, InstanceKind kind)
      : session_(session), kind_(kind) {}

  InstanceKind instance_kind() const override { return kind_; }
  absl::StatusOr<Prediction> Predict(const Instance& x) const override {
    UA_ASSIGN(r, session_->Send(ProtocolMessage::Eval(x)));
    if (r.kind != MessageKind::kPrediction) {
      return absl::FailedPreconditionError(
          absl::StrCat("Refused: ", RefusalReasonName(r.reason)));
    }
    return r.prediction;
  }
  std::string Describe() const override { return "datcol_eval"; }

 private:
  Session* session_;
  InstanceKind kind_;
};

absl::StatusOr<Dataset> SampleForSession(const DatasetDistribution& data,
                                         const Session& session,
                                         uint64_t seed) {
  UA_ASSIGN(s, data.Sample(DeriveSeed(seed, 0, "data")));
  if (static_cast<int>(s.size()) != session.capacity()) {
    return ConfigInvalid(absl::StrCat(
        "env samples ", s.size(),
        " examples but the collector takes n = ", session.capacity()));
  }
  return s;
}

absl::Status AddAllBut(Session& session, const Dataset& s, size_t i, size_t j) {
  for (size_t t = 0; t < s.size(); ++t) {
    if (t == i || t == j) continue;
    UA_ASSIGN(r, session.Send(ProtocolMessage::Add(s[t])));
    if (r.kind != MessageKind::kAck) {
      return absl::FailedPreconditionError(
          absl::StrCat("Refused: Add (", RefusalReasonName(r.reason), ")"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

Environment MakeEchoReaderEnv(const DatasetDistribution& data) {
  return [data](Session& session, uint64_t seed) -> absl::StatusOr<int> {
    UA_ASSIGN(s, SampleForSession(data, session, seed));
    // First pair with distinct labels.
    const size_t i = 0;
    size_t j = 1;
    while (j < s.size() && s[j].label == s[0].label) ++j;
    if (j == s.size()) return ConfigInvalid("no two distinct labels");
    UA_RETURN_IF_ERROR(AddAllBut(session, s, i, j));
    UA_RETURN_IF_ERROR(session.RequesterAdd(s[i], s[j]));
    UA_RETURN_IF_ERROR(session.RequesterDelete());
    UA_ASSIGN(r, session.Send(ProtocolMessage::Eval(s[i].instance)));
    if (r.kind != MessageKind::kPrediction) return 0;
    const Label& y1 = s[j].label;
    const double v1 = y1.kind == LabelKind::kClass ? y1.class_id : y1.value;
    return r.prediction.kind == PredictionKind::kRealValue &&
                   r.prediction.value == v1
               ? 1
               : 0;
  };
}

Environment MakeDiEnvAdapter(InferenceAttackerFactory attacker,
                             DatasetDistribution data) {
  return [attacker = std::move(attacker), data = std::move(data)](
             Session& session, uint64_t seed) -> absl::StatusOr<int> {
    UA_ASSIGN(s, SampleForSession(data, session, seed));
    Rng pick(DeriveSeed(seed, 0, "pick"));
    Rng coin(DeriveSeed(seed, 0, "coin"));
    const auto idx = pick.SampleWithoutReplacement(s.size(), 2);
    const size_t i = idx[0], j = idx[1];
    UA_RETURN_IF_ERROR(AddAllBut(session, s, i, j));
    UA_RETURN_IF_ERROR(session.RequesterAdd(s[i], s[j]));

    auto view = std::make_shared<EvalModel>(&session, s[i].instance.kind());
    auto gate = std::make_shared<PhaseGate>();
    Oracle before(view, Phase::kBeforeDeletion, gate);
    UA_ASSIGN(adv, attacker(DeriveSeed(seed, 0, "attacker")));
    Challenge challenge{s[i], s[j]};
    UA_RETURN_IF_ERROR(adv->ObserveBefore(challenge, before, coin));
    gate->Advance();
    UA_RETURN_IF_ERROR(session.RequesterDelete());
    Oracle after(view, Phase::kAfterDeletion, gate);
    UA_ASSIGN(guess, adv->GuessAfter(after, coin));
    gate->Revoke();
    return guess.value;
  };
}

}  // namespace unlearnaudit
