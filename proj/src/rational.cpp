#include "uncover/rational.hpp"

namespace uncover {

Rat rat_from_string(const std::string& s) {
    const auto slash = s.find('/');
    try {
        BigInt num(slash == std::string::npos ? s : s.substr(0, slash));
        BigInt den = slash == std::string::npos ? BigInt(1) : BigInt(s.substr(slash + 1));
        if (den == 0) throw schema_error("malformed rational '" + s + "': zero denominator");
        return Rat(num, den);
    } catch (const schema_error&) {
        throw;
    } catch (const std::exception&) {
        throw schema_error("malformed rational '" + s + "'");
    }
}

}  // namespace uncover
