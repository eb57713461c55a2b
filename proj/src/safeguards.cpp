#include "surveymon/safeguards.h"

#include <set>

#include <fmt/format.h>

#include "default_rules.h"
#include "surveymon/utf8.h"

namespace surveymon::safeguards {

std::string_view rule_kind_name(RuleKind k) { return k == RuleKind::kLeak ? "leak" : "off_topic"; }

Rule::Rule(std::string id, std::string pattern, std::string description, RuleKind kind)
    : id_(std::move(id)), pattern_(std::move(pattern)), description_(std::move(description)), kind_(kind) {
  if (id_.empty()) throw ConfigError("rule id must not be empty");
  try {
    re_ = std::regex(pattern_, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
  } catch (const std::regex_error& e) {
    throw ConfigError(fmt::format("rule '{}': pattern does not compile: {}", id_, e.what()));
  }
}

bool Rule::matches(std::string_view prompt) const {
  return std::regex_search(prompt.begin(), prompt.end(), re_);
}

void GateConfig::check() const {
  if (max_prompt_chars == 0) throw ConfigError("max_prompt_chars must be positive");
  std::set<std::string> ids;
  for (const auto* list : {&off_topic_rules, &leak_rules}) {
    for (const auto& r : *list) {
      if (!ids.insert(r.id()).second) throw ConfigError(fmt::format("duplicate rule id '{}'", r.id()));
    }
  }
}

std::vector<Rule> rules_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("rule file must be a JSON array");
  std::vector<Rule> rules;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& item = j[i];
    const auto text = [&](const char* key, bool required) -> std::string {
      const auto it = item.find(key);
      if (it == item.end()) {
        if (required) throw ConfigError(fmt::format("rule {}: missing '{}'", i, key));
        return {};
      }
      if (!it->is_string()) throw ConfigError(fmt::format("rule {}: '{}' must be a string", i, key));
      return it->get<std::string>();
    };
    if (!item.is_object()) throw ConfigError(fmt::format("rule {} must be an object", i));
    const std::string kind = text("kind", false);
    RuleKind k = RuleKind::kOffTopic;
    if (kind == "leak") {
      k = RuleKind::kLeak;
    } else if (!kind.empty() && kind != "off_topic") {
      throw ConfigError(fmt::format("rule {}: unknown kind '{}'", i, kind));
    }
    rules.emplace_back(text("id", true), text("pattern", true), text("description", false), k);
  }
  return rules;
}

nlohmann::ordered_json to_json(const std::vector<Rule>& rules) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rules) {
    out.push_back({{"id", r.id()},
                   {"kind", rule_kind_name(r.kind())},
                   {"pattern", r.pattern()},
                   {"description", r.description()}});
  }
  return out;
}

GateConfig make_gate_config(std::size_t max_prompt_chars, const std::vector<Rule>& rules) {
  GateConfig cfg;
  cfg.max_prompt_chars = max_prompt_chars;
  for (const auto& r : rules) {
    (r.kind() == RuleKind::kLeak ? cfg.leak_rules : cfg.off_topic_rules).push_back(r);
  }
  cfg.check();
  return cfg;
}

std::vector<Rule> default_rules() {
  static const std::vector<Rule> rules =
      rules_from_json(nlohmann::json::parse(generated::kDefaultRulesJson));
  return rules;
}

GateConfig default_gate_config(std::size_t max_prompt_chars) {
  return make_gate_config(max_prompt_chars, default_rules());
}

std::string_view reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::kTooLong:
      return "too_long";
    case RejectReason::kOffTopic:
      return "off_topic";
    case RejectReason::kLeakAttempt:
      return "leak_attempt";
  }
  return "unknown";
}

GateDecision gate_prompt(std::string_view prompt, const GateConfig& cfg) {
  if (utf8::length(prompt) > cfg.max_prompt_chars) {
    return {Verdict::kReject, RejectReason::kTooLong, {}};
  }
  for (const auto& r : cfg.leak_rules) {
    if (r.matches(prompt)) return {Verdict::kReject, RejectReason::kLeakAttempt, r.id()};
  }
  for (const auto& r : cfg.off_topic_rules) {
    if (r.matches(prompt)) return {Verdict::kReject, RejectReason::kOffTopic, r.id()};
  }
  return {};
}

nlohmann::ordered_json to_json(const GateDecision& d) {
  nlohmann::ordered_json j;
  j["verdict"] = d.allowed() ? "allow" : "reject";
  if (d.reason) {
    j["reason"] = reason_name(*d.reason);
    if (!d.rule_id.empty()) j["rule_id"] = d.rule_id;
  }
  return j;
}

void RateLimitConfig::check() const {
  if (limit == 0) throw ConfigError("rate limit must be a positive number of requests");
  if (window.count() <= 0) throw ConfigError("rate window must be positive");
}

RateLimiter::RateLimiter(RateLimitConfig cfg) : cfg_(cfg) { cfg_.check(); }

RateLimiter::Bucket& RateLimiter::bucket(const std::string& user) {
  {
    std::shared_lock lock(map_mu_);
    if (const auto it = buckets_.find(user); it != buckets_.end()) return *it->second;
  }
  std::unique_lock lock(map_mu_);
  auto& slot = buckets_[user];
  if (!slot) slot = std::make_unique<Bucket>();
  return *slot;
}

RateDecision RateLimiter::check(const std::string& user, TimePoint now) {
  Bucket& b = bucket(user);
  std::lock_guard lock(b.mu);
  if (!b.times.empty() && now < b.times.back()) {
    throw ClockRegression(fmt::format("rate limiter: clock went backwards for user '{}'", user));
  }
  while (!b.times.empty() && b.times.front() <= now - cfg_.window) b.times.pop_front();

  RateDecision d;
  if (b.times.size() < cfg_.limit) {
    b.times.push_back(now);
    d.allowed = true;
    d.remaining = cfg_.limit - b.times.size();
  } else {
    d.retry_after = b.times.front() + cfg_.window - now;
  }
  return d;
}

nlohmann::ordered_json RateLimiter::snapshot() const {
  nlohmann::ordered_json j;
  j["limit"] = cfg_.limit;
  j["window_ms"] = cfg_.window.count();
  auto& users = j["users"] = nlohmann::ordered_json::object();
  std::shared_lock lock(map_mu_);
  for (const auto& [user, b] : buckets_) {
    std::lock_guard block(b->mu);
    if (b->times.empty()) continue;
    auto& list = users[user] = nlohmann::ordered_json::array();
    for (auto t : b->times) list.push_back(t.time_since_epoch().count());
  }
  return j;
}

void RateLimiter::restore(const nlohmann::json& snap) {
  try {
    if (snap.at("limit").get<std::size_t>() != cfg_.limit ||
        snap.at("window_ms").get<long long>() != cfg_.window.count()) {
      throw ConfigError("rate limit snapshot was taken with a different limit or window");
    }
    std::map<std::string, std::unique_ptr<Bucket>> restored;
    for (const auto& [user, list] : snap.at("users").items()) {
      auto b = std::make_unique<Bucket>();
      for (const auto& v : list) {
        const TimePoint t{Duration{v.get<long long>()}};
        if (!b->times.empty() && t < b->times.back()) {
          throw ConfigError(fmt::format("snapshot timestamps for '{}' are not sorted", user));
        }
        b->times.push_back(t);
      }
      if (b->times.size() > cfg_.limit) {
        throw ConfigError(fmt::format("snapshot holds more than {} requests for '{}'", cfg_.limit, user));
      }
      restored.emplace(user, std::move(b));
    }
    std::unique_lock lock(map_mu_);
    buckets_ = std::move(restored);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("bad rate limit snapshot: {}", e.what()));
  }
}

}  // namespace surveymon::safeguards
