#pragma once

// Exception hierarchy. Everything thrown on bad *input* derives from
// invalid_input; budget_error signals an exhausted search budget rather than a
// wrong answer; internal_error marks a broken invariant inside the library and
// intentionally sits outside the `error` branch.

#include <stdexcept>
#include <string>

namespace chakravala {

class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

class invalid_input : public error {
 public:
  explicit invalid_input(const std::string& what) : error(what) {}
};

// n is a perfect square (or < 2): the Pell equation x^2 - n y^2 = +-1 is
// degenerate and the cycle never starts.
class nonsquare_required : public invalid_input {
 public:
  explicit nonsquare_required(const std::string& what) : invalid_input(what) {}
};

class invalid_modulus : public invalid_input {
 public:
  explicit invalid_modulus(const std::string& what) : invalid_input(what) {}
};

// Modulus k with k^2 >= n: "best mod k" is only meaningful below sqrt(n).
class modulus_too_large : public invalid_input {
 public:
  explicit modulus_too_large(const std::string& what) : invalid_input(what) {}
};

class budget_error : public error {
 public:
  explicit budget_error(const std::string& what) : error(what) {}
};

class internal_error : public std::logic_error {
 public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace chakravala
