#pragma once

/**
 * @file weights.hpp
 * @brief Positive weight sequences t -> c(t) on the naturals.
 *
 * Supported shapes: the rational family (t+d)/(t+a) and its reciprocal (the
 * product dimension d is supplied at evaluation time), a finite table with an
 * eventual constant value, and a constant.
 */

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dartree/error.hpp"
#include "dartree/rational.hpp"

namespace dartree {

class WeightSequence {
 public:
  enum class Kind { RationalFamily, ReciprocalFamily, Table, Constant };

  static WeightSequence c_a(const Rational& a) {
    if (a <= 0) fail(ErrorKind::InvalidParameter, "parameter a must be positive");
    WeightSequence w(Kind::RationalFamily);
    w.param_ = a;
    return w;
  }
  static WeightSequence recip_c_a(const Rational& a) {
    if (a <= 0) fail(ErrorKind::InvalidParameter, "parameter a must be positive");
    WeightSequence w(Kind::ReciprocalFamily);
    w.param_ = a;
    return w;
  }
  static WeightSequence table(std::vector<Rational> values, const Rational& eventual) {
    if (eventual <= 0) fail(ErrorKind::InvalidParameter, "eventual value must be positive");
    for (const auto& v : values)
      if (v <= 0) fail(ErrorKind::InvalidParameter, "table values must be positive");
    WeightSequence w(Kind::Table);
    w.values_ = std::move(values);
    w.param_ = eventual;
    return w;
  }
  static WeightSequence constant(const Rational& value) {
    if (value <= 0) fail(ErrorKind::InvalidParameter, "constant must be positive");
    WeightSequence w(Kind::Constant);
    w.param_ = value;
    return w;
  }

  Kind kind() const { return kind_; }
  /// a for the two families, the eventual value for tables, the constant.
  const Rational& parameter() const { return param_; }
  const std::vector<Rational>& values() const { return values_; }

  Rational at(long t, std::size_t d) const {
    const Rational td(t + static_cast<long>(d));
    switch (kind_) {
      case Kind::RationalFamily: return td / (Rational(t) + param_);
      case Kind::ReciprocalFamily: return (Rational(t) + param_) / td;
      case Kind::Table:
        return static_cast<std::size_t>(t) < values_.size() ? values_[static_cast<std::size_t>(t)] : param_;
      case Kind::Constant: return param_;
    }
    return param_;
  }

  /// inf_t c(t); the families are monotone between their value at 0 and 1.
  Rational inf(std::size_t d) const {
    switch (kind_) {
      case Kind::RationalFamily:
      case Kind::ReciprocalFamily: return std::min(at(0, d), Rational(1));
      case Kind::Table: return values_.empty() ? param_ : std::min(*std::min_element(values_.begin(), values_.end()), param_);
      case Kind::Constant: return param_;
    }
    return param_;
  }
  Rational sup(std::size_t d) const {
    switch (kind_) {
      case Kind::RationalFamily:
      case Kind::ReciprocalFamily: return std::max(at(0, d), Rational(1));
      case Kind::Table: return values_.empty() ? param_ : std::max(*std::max_element(values_.begin(), values_.end()), param_);
      case Kind::Constant: return param_;
    }
    return param_;
  }

  /// t -> 1/c(t), in the same family of shapes.
  WeightSequence reciprocal() const {
    switch (kind_) {
      case Kind::RationalFamily: return recip_c_a(param_);
      case Kind::ReciprocalFamily: return c_a(param_);
      case Kind::Table: {
        std::vector<Rational> inv;
        for (const auto& v : values_) inv.push_back(1 / v);
        return table(std::move(inv), 1 / param_);
      }
      case Kind::Constant: return constant(1 / param_);
    }
    return *this;
  }

  /// Same syntax as accepted by parse_weight_sequence.
  std::string str() const {
    switch (kind_) {
      case Kind::RationalFamily: return "c_a:" + to_string(param_);
      case Kind::ReciprocalFamily: return "recip_c_a:" + to_string(param_);
      case Kind::Table: {
        std::string s = "table:";
        for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? "," : "") + to_string(values_[i]);
        return s + ";eventual=" + to_string(param_);
      }
      case Kind::Constant: return "const:" + to_string(param_);
    }
    return {};
  }

  friend bool operator==(const WeightSequence& a, const WeightSequence& b) {
    return a.kind_ == b.kind_ && a.param_ == b.param_ && a.values_ == b.values_;
  }

 private:
  explicit WeightSequence(Kind k) : kind_(k) {}

  Kind kind_;
  Rational param_ = 1;
  std::vector<Rational> values_;
};

/// "c_a:3", "recip_c_a:2", "table:2,1,1;eventual=1", "const:1".
inline WeightSequence parse_weight_sequence(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) fail(ErrorKind::MalformedInput, "weight sequence needs 'kind:args'");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);
  if (kind == "c_a") return WeightSequence::c_a(parse_rational(rest));
  if (kind == "recip_c_a") return WeightSequence::recip_c_a(parse_rational(rest));
  if (kind == "const") return WeightSequence::constant(parse_rational(rest));
  if (kind == "table") {
    const auto semi = rest.find(';');
    if (semi == std::string_view::npos) fail(ErrorKind::MalformedInput, "table needs ';eventual=<value>'");
    const std::string_view list = rest.substr(0, semi);
    std::string_view tail = rest.substr(semi + 1);
    constexpr std::string_view key = "eventual=";
    if (tail.substr(0, key.size()) != key) fail(ErrorKind::MalformedInput, "table needs ';eventual=<value>'");
    tail.remove_prefix(key.size());
    std::vector<Rational> values;
    std::stringstream ss{std::string(list)};
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(parse_rational(item));
    return WeightSequence::table(std::move(values), parse_rational(tail));
  }
  fail(ErrorKind::MalformedInput, "unknown weight sequence kind '" + std::string(kind) + "'");
}

}  // namespace dartree
