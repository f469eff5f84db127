#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ptdilate {

/// Failure category. Validation errors come from bad inputs or configuration,
/// numeric errors from computations that cannot proceed.
enum class ErrorKind { Validation, Numeric };

/// Base class of every error raised by the library. `name()` is the stable
/// identifier printed by the CLI (e.g. "NotHermitian").
class Error : public std::runtime_error {
 public:
  Error(std::string name, ErrorKind kind, const std::string& message)
      : std::runtime_error(name + ": " + message), name_(std::move(name)), kind_(kind) {}

  const std::string& name() const noexcept { return name_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string name_;
  ErrorKind kind_;
};

#define PTDILATE_DEFINE_ERROR(Type, Kind)                     \
  class Type : public Error {                                 \
   public:                                                    \
    explicit Type(const std::string& message)                 \
        : Error(#Type, ErrorKind::Kind, message) {}           \
  }

PTDILATE_DEFINE_ERROR(InvalidArgument, Validation);
PTDILATE_DEFINE_ERROR(SchemaError, Validation);

PTDILATE_DEFINE_ERROR(NotHermitian, Numeric);
PTDILATE_DEFINE_ERROR(NotPositive, Numeric);
PTDILATE_DEFINE_ERROR(SingularPair, Numeric);
PTDILATE_DEFINE_ERROR(SingularPropagator, Numeric);
PTDILATE_DEFINE_ERROR(PositivityLost, Numeric);
PTDILATE_DEFINE_ERROR(ZeroBranch, Numeric);
PTDILATE_DEFINE_ERROR(GridTooCoarse, Numeric);
PTDILATE_DEFINE_ERROR(RankDeficient, Numeric);
PTDILATE_DEFINE_ERROR(SingularReadout, Numeric);
PTDILATE_DEFINE_ERROR(ZeroSelectionBranch, Numeric);

#undef PTDILATE_DEFINE_ERROR

/// Aggregated configuration failure: every violated precondition is listed.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error("ValidationError", ErrorKind::Validation, join(problems)),
        problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace ptdilate
