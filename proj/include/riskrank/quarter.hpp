#pragma once

#include <charconv>
#include <compare>
#include <string>
#include <string_view>

#include "riskrank/error.hpp"

namespace riskrank {

/// Calendar quarter stored as year * 4 + (quarter - 1) so that date
/// arithmetic is plain integer arithmetic.
class Quarter {
 public:
  constexpr Quarter() = default;
  constexpr explicit Quarter(int index) : index_(index) {}
  constexpr Quarter(int year, int quarter) : index_(year * 4 + (quarter - 1)) {}

  /// Parses "YYYY-Qn".
  static Quarter parse(std::string_view text) {
    auto fail = [&] {
      return Error(ErrorCode::parse, "invalid quarter '" + std::string(text) + "', expected YYYY-Qn");
    };
    if (text.size() != 7 || text[4] != '-' || (text[5] != 'Q' && text[5] != 'q')) throw fail();
    int year = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + 4, year);
    if (ec != std::errc{} || ptr != text.data() + 4) throw fail();
    const int q = text[6] - '0';
    if (q < 1 || q > 4) throw fail();
    return Quarter(year, q);
  }

  constexpr int index() const { return index_; }
  constexpr int year() const { return index_ >= 0 ? index_ / 4 : (index_ - 3) / 4; }
  constexpr int quarter_of_year() const { return index_ - year() * 4 + 1; }

  std::string str() const {
    return std::to_string(year()) + "-Q" + std::to_string(quarter_of_year());
  }

  constexpr Quarter operator+(int quarters) const { return Quarter(index_ + quarters); }
  constexpr Quarter operator-(int quarters) const { return Quarter(index_ - quarters); }
  constexpr int operator-(Quarter other) const { return index_ - other.index_; }
  constexpr Quarter& operator++() {
    ++index_;
    return *this;
  }

  constexpr auto operator<=>(const Quarter&) const = default;

 private:
  int index_ = 0;
};

}  // namespace riskrank
