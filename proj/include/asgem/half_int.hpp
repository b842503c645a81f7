#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace asgem {

/// Angular momentum quantum number stored as twice its value so that
/// half-integers are exact and selection rules are integer comparisons.
class HalfInt {
public:
    constexpr HalfInt() = default;

    static constexpr HalfInt from_twice(int twice) noexcept { return HalfInt(twice); }
    static constexpr HalfInt from_int(int value) noexcept { return HalfInt(2 * value); }

    /// Accepts "3/2", "-1/2", "2", "+1". Throws ParseError otherwise.
    static HalfInt parse(std::string_view text);

    constexpr int twice() const noexcept { return twice_; }
    constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }
    constexpr double value() const noexcept { return 0.5 * twice_; }
    /// 2j + 1
    constexpr int multiplicity() const noexcept { return twice_ + 1; }

    std::string str() const;

    constexpr HalfInt operator-() const noexcept { return HalfInt(-twice_); }
    constexpr HalfInt operator+(HalfInt o) const noexcept { return HalfInt(twice_ + o.twice_); }
    constexpr HalfInt operator-(HalfInt o) const noexcept { return HalfInt(twice_ - o.twice_); }

    constexpr auto operator<=>(const HalfInt&) const = default;

private:
    constexpr explicit HalfInt(int twice) noexcept : twice_(twice) {}

    int twice_ = 0;
};

/// True when |m| <= j and j - m is integral.
constexpr bool is_valid_projection(HalfInt j, HalfInt m) noexcept
{
    return j.twice() >= 0 && m.twice() <= j.twice() && -m.twice() <= j.twice() &&
           (j.twice() - m.twice()) % 2 == 0;
}

/// |a - b| <= c <= a + b with a + b + c integral.
constexpr bool satisfies_triangle(HalfInt a, HalfInt b, HalfInt c) noexcept
{
    const int ta = a.twice(), tb = b.twice(), tc = c.twice();
    if (ta < 0 || tb < 0 || tc < 0)
        return false;
    if ((ta + tb + tc) % 2 != 0)
        return false;
    const int lo = ta > tb ? ta - tb : tb - ta;
    return tc >= lo && tc <= ta + tb;
}

namespace literals {
constexpr HalfInt operator""_j(unsigned long long v) { return HalfInt::from_int(static_cast<int>(v)); }
/// 3_half == 3/2
constexpr HalfInt operator""_half(unsigned long long v) { return HalfInt::from_twice(static_cast<int>(v)); }
} // namespace literals

} // namespace asgem

template <>
struct std::hash<asgem::HalfInt> {
    std::size_t operator()(asgem::HalfInt h) const noexcept { return std::hash<int>{}(h.twice()); }
};
