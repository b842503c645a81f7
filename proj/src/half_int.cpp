#include "asgem/half_int.hpp"

#include "asgem/error.hpp"

#include <charconv>

namespace asgem {

namespace {

bool parse_int(std::string_view s, int& out)
{
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    if (s.empty())
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace

HalfInt HalfInt::parse(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
        text.remove_suffix(1);

    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        int v = 0;
        if (!parse_int(text, v))
            throw ParseError("not an integer or half-integer: '" + std::string(text) + "'");
        return from_int(v);
    }
    int num = 0;
    if (!parse_int(text.substr(0, slash), num) || text.substr(slash + 1) != "2" || num % 2 == 0)
        throw ParseError("not a half-integer of the form n/2 with odd n: '" + std::string(text) + "'");
    return from_twice(num);
}

std::string HalfInt::str() const
{
    if (is_integer())
        return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
}

} // namespace asgem
