#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace surveymon::safeguards {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class RuleKind { kOffTopic, kLeak };

std::string_view rule_kind_name(RuleKind k);

/// A case-insensitive ECMAScript regular expression with an audit id.
class Rule {
 public:
  /// Throws ConfigError when the pattern does not compile.
  Rule(std::string id, std::string pattern, std::string description, RuleKind kind);

  const std::string& id() const { return id_; }
  const std::string& pattern() const { return pattern_; }
  const std::string& description() const { return description_; }
  RuleKind kind() const { return kind_; }
  bool matches(std::string_view prompt) const;

 private:
  std::string id_;
  std::string pattern_;
  std::string description_;
  RuleKind kind_;
  std::regex re_;
};

struct GateConfig {
  std::size_t max_prompt_chars = 0;
  std::vector<Rule> off_topic_rules;
  std::vector<Rule> leak_rules;

  /// Throws ConfigError on max_prompt_chars == 0 or duplicate rule ids.
  void check() const;
};

/// Rule file: a JSON array of {id, pattern, description, kind?} where kind
/// is "leak" or "off_topic" (the default).
std::vector<Rule> rules_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const std::vector<Rule>& rules);
GateConfig make_gate_config(std::size_t max_prompt_chars, const std::vector<Rule>& rules);

/// The rule set shipped in data/gate_rules.json.
std::vector<Rule> default_rules();
GateConfig default_gate_config(std::size_t max_prompt_chars);

enum class Verdict { kAllow, kReject };
enum class RejectReason { kTooLong, kOffTopic, kLeakAttempt };

std::string_view reason_name(RejectReason r);

struct GateDecision {
  Verdict verdict = Verdict::kAllow;
  std::optional<RejectReason> reason;
  std::string rule_id;  // set for kOffTopic and kLeakAttempt

  bool allowed() const { return verdict == Verdict::kAllow; }
};

/// Checks length (Unicode scalar values), then leak rules, then off-topic
/// rules, each list in configuration order; the first hit decides.
GateDecision gate_prompt(std::string_view prompt, const GateConfig& cfg);

nlohmann::ordered_json to_json(const GateDecision& d);

using TimePoint = std::chrono::sys_time<std::chrono::milliseconds>;
using Duration = std::chrono::milliseconds;

struct RateLimitConfig {
  std::size_t limit = 0;  // requests per window; required, no default
  Duration window = std::chrono::hours(1);

  void check() const;
};

struct RateDecision {
  bool allowed = false;
  Duration retry_after{0};
  std::size_t remaining = 0;
};

class ClockRegression : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-user sliding-window limiter. A request at `now` counts the user's
/// accepted requests in (now - window, now]; it is allowed iff fewer than
/// `limit` are there, so every half-open interval of one window length
/// holds at most `limit` accepted requests.
///
/// Calls for the same user are serialised; different users proceed
/// concurrently.
class RateLimiter {
 public:
  explicit RateLimiter(RateLimitConfig cfg);

  /// Throws ClockRegression when `now` precedes the user's latest stored request.
  RateDecision check(const std::string& user, TimePoint now);

  const RateLimitConfig& config() const { return cfg_; }

  /// {"limit", "window_ms", "users": {id: [epoch ms, ...]}}
  nlohmann::ordered_json snapshot() const;
  /// Restores a snapshot; its limit and window must match this limiter's.
  void restore(const nlohmann::json& snap);

 private:
  struct Bucket {
    std::mutex mu;
    std::deque<TimePoint> times;
  };
  Bucket& bucket(const std::string& user);

  RateLimitConfig cfg_;
  mutable std::shared_mutex map_mu_;
  std::map<std::string, std::unique_ptr<Bucket>> buckets_;
};

}  // namespace surveymon::safeguards
