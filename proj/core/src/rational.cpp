#include "lipkit/rational.hpp"

#include "lipkit/errors.hpp"

namespace lipkit {

Rational parse_fraction(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      return Rational(boost::multiprecision::cpp_int(text));
    }
    const boost::multiprecision::cpp_int num(text.substr(0, slash));
    const boost::multiprecision::cpp_int den(text.substr(slash + 1));
    if (den == 0) throw StructuralError("zero denominator in fraction '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    throw StructuralError("malformed fraction '" + text + "': " + e.what());
  }
}

}  // namespace lipkit
