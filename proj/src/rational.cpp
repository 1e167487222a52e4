#include "ffnet/rational.hpp"

#include "ffnet/errors.hpp"

#include <cctype>

namespace ffnet {

namespace {

bool is_integer_literal(std::string_view text) {
    if (!text.empty() && (text.front() == '-' || text.front() == '+'))
        text.remove_prefix(1);
    if (text.empty())
        return false;
    for (char c : text)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

Integer parse_integer(std::string_view text) {
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    return Integer(std::string(text), 10);
}

} // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const auto numerator = text.substr(0, slash);
    if (!is_integer_literal(numerator))
        throw ParseError("malformed rational '" + std::string(text) + "'");
    if (slash == std::string_view::npos)
        return Rational(parse_integer(numerator));

    const auto denominator = text.substr(slash + 1);
    if (!is_integer_literal(denominator) || denominator.front() == '-' || denominator.front() == '+')
        throw ParseError("malformed rational '" + std::string(text) + "'");
    Integer den = parse_integer(denominator);
    if (den == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational value(parse_integer(numerator), den);
    value.canonicalize();
    return value;
}

std::string to_string(const Rational& value) {
    if (value.get_den() == 1)
        return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

std::vector<double> to_doubles(const RationalVector& values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values)
        out.push_back(v.get_d());
    return out;
}

std::vector<std::string> to_strings(const RationalVector& values) {
    std::vector<std::string> out;
    out.reserve(values.size());
    for (const auto& v : values)
        out.push_back(to_string(v));
    return out;
}

Rational sum(const RationalVector& values) {
    Rational total = 0;
    for (const auto& v : values)
        total += v;
    return total;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
    if (a.size() != b.size())
        throw ContractViolation("dot: length mismatch");
    Rational total = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0)
            total += a[i] * b[i];
    return total;
}

bool is_zero(const RationalVector& values) {
    for (const auto& v : values)
        if (sgn(v) != 0)
            return false;
    return true;
}

} // namespace ffnet
