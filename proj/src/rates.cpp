#include "gaplab/rates.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gaplab {

RateAnnotations annotate_rates(long two_delta, std::optional<Rational> gamma,
                               std::optional<std::pair<long, long>> q_and_n) {
    if (two_delta < 3) throw std::invalid_argument("2*delta must be at least 3");
    RateAnnotations out;
    out.two_delta = two_delta;
    out.t = 2 * two_delta - 3;  // 4 delta - 3

    // with delta = two_delta / 2:
    //   8 delta - 6        = 4 two_delta - 6
    //   8 delta + 4        = 4 two_delta + 4
    //   6.5 / (delta - 1)  = 13 / (two_delta - 2)
    const Rational slope(4 * two_delta - 6);
    const Rational tail(13, two_delta - 2);
    out.gamma_star = Rational(1) / (Rational(10) + tail);

    if (gamma) {
        out.gamma = *gamma;
    } else if (q_and_n) {
        auto [q, n] = *q_and_n;
        if (q < 2 || n < 2) throw std::invalid_argument("q and n must be at least 2");
        double g = std::log(static_cast<double>(q)) / std::log(static_cast<double>(n));
        // record the double value exactly as a rational
        out.gamma = Rational(static_cast<long long>(std::llround(g * (1LL << 40))),
                             static_cast<long long>(1LL << 40));
        out.gamma_is_log_ratio = true;
    } else {
        out.gamma = out.gamma_star;
    }
    if (out.gamma.sign() <= 0) throw std::invalid_argument("gamma must be positive");

    out.epsilon = out.gamma / (Rational(1) + slope * out.gamma);
    const Rational numerator = out.gamma * (Rational(4 * two_delta + 4) + tail);
    out.round_exponent = Rational(1) - numerator / (Rational(1) + slope * out.gamma);
    return out;
}

std::string RateAnnotations::to_json() const {
    std::ostringstream os;
    os << "{\"two_delta\": " << two_delta << ", \"t\": " << t
       << ", \"gamma\": \"" << rational_str(gamma) << "\""
       << ", \"gamma_approx\": " << to_double(gamma)
       << ", \"gamma_is_log_ratio\": " << (gamma_is_log_ratio ? "true" : "false")
       << ", \"gamma_star\": \"" << rational_str(gamma_star) << "\""
       << ", \"epsilon\": \"" << rational_str(epsilon) << "\""
       << ", \"epsilon_approx\": " << to_double(epsilon)
       << ", \"round_exponent\": \"" << rational_str(round_exponent) << "\""
       << ", \"form\": \"" << form << "\"}";
    return os.str();
}

}  // namespace gaplab
