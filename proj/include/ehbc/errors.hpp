#pragma once

#include <stdexcept>
#include <string>

namespace ehbc {

// Argument outside the region where h1/h2 (or their derivatives) are defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidUnits : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The harvested energy cannot deliver the demanded bits in finite time.
class Infeasible : public std::runtime_error {
 public:
  Infeasible(const std::string& what, double deficit)
      : std::runtime_error(what), deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

// Two-epoch subproblem has no stronger-user rate meeting the bit totals.
class InconsistentBudget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Oracle asked to enumerate more harvests than it supports.
class TooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or unreadable input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ehbc
