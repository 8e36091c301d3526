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

// Weak deletion-compliance harness: the data collector protocol, the honest
// deletion requester, pluggable environments and advantage estimation.

#ifndef UNLEARNAUDIT_COMPLIANCE_H_
#define UNLEARNAUDIT_COMPLIANCE_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "unlearnaudit/attacks.h"
#include "unlearnaudit/core.h"
#include "unlearnaudit/data.h"
#include "unlearnaudit/learners.h"

namespace unlearnaudit {

enum class MessageKind { kAdd, kDel, kEval, kAck, kRefused, kPrediction };

enum class RefusalReason {
  kNotServing,        // Eval or Del before the n-th Add.
  kCollectionClosed,  // Add after the n-th Add.
  kBudgetExhausted,   // More than k deletions.
  kKindMismatch,      // Eval instance does not fit the model.
  kTrainingFailed,
  kNotARequest,  // A response verb sent as a request.
};

const char* RefusalReasonName(RefusalReason reason);

struct ProtocolMessage {
  MessageKind kind = MessageKind::kAck;
  Example example;                                    // kAdd, kDel
  Instance instance;                                  // kEval
  RefusalReason reason = RefusalReason::kNotServing;  // kRefused
  Prediction prediction;                              // kPrediction

  static ProtocolMessage Add(Example e);
  static ProtocolMessage Del(Example e);
  static ProtocolMessage Eval(Instance x);
  static ProtocolMessage Ack();
  static ProtocolMessage Refused(RefusalReason reason);
  static ProtocolMessage Predicted(Prediction p);

  friend bool operator==(const ProtocolMessage& a, const ProtocolMessage& b);
};

// One message per line: "UA1 <VERB> <payload...>". Doubles are written in
// shortest round-trip form. See docs/protocol.md.
inline constexpr std::string_view kProtocolVersion = "UA1";
std::string EncodeMessage(const ProtocolMessage& msg);
absl::StatusOr<ProtocolMessage> DecodeMessage(std::string_view line);

enum class DatColPhase { kCollecting, kServing, kPostDeletion };

const char* DatColPhaseName(DatColPhase phase);

struct DatColState {
  DatColPhase phase = DatColPhase::kCollecting;
  std::vector<Example> stored;  // Arrival order.
  ModelPtr model;
  int capacity = 0;  // n
  int budget = 0;    // k
  int deletions_used = 0;
};

DatColState NewDatCol(int capacity, int budget);

// Seeds used by DatColStep. Training after the n-th Add uses round 0, the
// retrain after deletion d uses round d.
uint64_t DatColTrainSeed(uint64_t seed, int round);
uint64_t DatColShuffleSeed(uint64_t seed, int round);

// Advances the collector by one message and returns its response. Never
// fails: protocol violations come back as Refused.
ProtocolMessage DatColStep(DatColState& state, const ProtocolMessage& msg,
                           const LearnerSpec& spec, uint64_t seed);

// Message-level view of a collector backend.
class DataCollector {
 public:
  virtual ~DataCollector() = default;
  virtual ProtocolMessage Handle(const ProtocolMessage& msg) = 0;
};

using CollectorFactory = std::function<std::unique_ptr<DataCollector>(
    const LearnerSpec& spec, int capacity, int budget, uint64_t seed)>;

std::unique_ptr<DataCollector> MakeHonestCollector(const LearnerSpec& spec,
                                                   int capacity, int budget,
                                                   uint64_t seed);
// Acknowledges Del but never removes or retrains.
std::unique_ptr<DataCollector> MakeIgnoringCollector(const LearnerSpec& spec,
                                                     int capacity, int budget,
                                                     uint64_t seed);
// Honest, except Eval after a deletion answers the deleted label as a
// real-valued prediction (class id for class labels).
std::unique_ptr<DataCollector> MakeLeakyCollector(const LearnerSpec& spec,
                                                  int capacity, int budget,
                                                  uint64_t seed);

// Reads request lines from `in`, answers each on `out`. Undecodable lines
// get an error line "UA1 ERROR <message>".
absl::Status ServeStream(DataCollector& collector, std::istream& in,
                         std::ostream& out);

// The environment's handle on one session. DelReq_b is internal: the env
// only hands it the challenge pair and later the trigger.
class Session {
 public:
  Session(DataCollector& collector, int capacity, int budget, int world);

  int capacity() const { return capacity_; }
  int budget() const { return budget_; }
  // Direct messages from the env. More than k - 1 own Del requests fail
  // with BudgetViolation.
  absl::StatusOr<ProtocolMessage> Send(const ProtocolMessage& msg);
  // DelReq forwards Add(e0) and Add(e1).
  absl::Status RequesterAdd(const Example& e0, const Example& e1);
  // DelReq sends Del(e_b).
  absl::Status RequesterDelete();

  int64_t steps() const { return steps_; }
  int64_t trigger_step() const { return trigger_step_; }
  int own_deletions() const { return own_deletions_; }

 private:
  DataCollector& collector_;
  int capacity_;
  int budget_;
  int world_;
  std::vector<Example> pair_;
  int64_t steps_ = 0;
  int64_t trigger_step_ = -1;
  int own_deletions_ = 0;
};

// Returns the env's guess bit.
using Environment =
    std::function<absl::StatusOr<int>(Session& session, uint64_t seed)>;

struct ComplianceConfig {
  LearnerSpec learner;
  int capacity = 100;  // n
  int budget = 1;      // k
  int64_t sessions = 1000;
  uint64_t seed = 0;
  int workers = 1;
  CollectorFactory collector;  // Honest when empty.
};

struct WorldOutcome {
  int64_t session = 0;
  int world = 0;
  int guess = 0;
  int64_t trigger_step = -1;
};

struct ComplianceStats {
  int64_t sessions = 0;
  int64_t world0 = 0;
  int64_t world1 = 0;
  int64_t ones_world0 = 0;
  int64_t ones_world1 = 0;
  double p0 = 0.0;  // P(guess = 1 | world 0)
  double p1 = 0.0;
  double ci0_low = 0.0, ci0_high = 0.0;
  double ci1_low = 0.0, ci1_high = 0.0;
  double advantage = 0.0;
  double signed_advantage = 0.0;  // p1 - p0
  double standard_error = 0.0;    // of p1 - p0
  double ci_width = 0.0;          // 1.96 * standard_error * 2
  std::vector<WorldOutcome> rows;
};

// Session s plays world s % 2.
absl::StatusOr<ComplianceStats> RunCompliance(const ComplianceConfig& config,
                                              const Environment& env);

// Ignores the collector and outputs a fresh coin.
Environment MakeCoinEnv();
// Challenge pair of two distinct class labels, Eval once after the trigger
// and read the answer as a class id. Wins against the leaky collector.
Environment MakeEchoReaderEnv(const DatasetDistribution& data);
// Plays the inference challenger around a DI attacker: samples S, Adds all
// but e_i, e_j, routes the pair through DelReq, and runs the attacker with
// Eval as the before- and after-oracles.
Environment MakeDiEnvAdapter(InferenceAttackerFactory attacker,
                             DatasetDistribution data);

}  // namespace unlearnaudit

#endif  // UNLEARNAUDIT_COMPLIANCE_H_
