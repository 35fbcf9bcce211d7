#pragma once

#include <stdexcept>
#include <string>

namespace rmlift {

enum class ErrorKind {
  invalid_argument,
  infeasible,
  budget_exceeded,
  check_failed,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), kind_(kind), name_(std::move(name)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  ErrorKind kind_;
  std::string name_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& name, const std::string& what) {
  throw Error(kind, name, what);
}

inline void require(bool cond, const std::string& name, const std::string& what) {
  if (!cond) throw Error(ErrorKind::invalid_argument, name, what);
}

}  // namespace rmlift
