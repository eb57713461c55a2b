#pragma once

#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace surveymon {

/// Either a validated value or the list of issues that prevented it.
template <typename T, typename Issue>
class Checked {
 public:
  Checked(T value) : state_(std::move(value)) {}
  Checked(std::vector<Issue> issues) : state_(std::move(issues)) {
    if (std::get<1>(state_).empty()) {
      throw std::logic_error("Checked: failure must carry at least one issue");
    }
  }

  bool ok() const { return state_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw std::logic_error("Checked: value() on failure");
    return std::get<0>(state_);
  }
  T&& value() && {
    if (!ok()) throw std::logic_error("Checked: value() on failure");
    return std::get<0>(std::move(state_));
  }

  const std::vector<Issue>& issues() const {
    static const std::vector<Issue> kNone;
    return ok() ? kNone : std::get<1>(state_);
  }

 private:
  std::variant<T, std::vector<Issue>> state_;
};

}  // namespace surveymon
