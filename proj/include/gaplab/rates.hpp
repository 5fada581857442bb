#pragma once

#include <optional>
#include <string>

#include "gaplab/rational.hpp"

namespace gaplab {

// Closed-form rate arithmetic for the reduction's parameter calculus, with
// the o(1)/O(kappa) terms dropped (every report labels these values
// "asymptotic-form"). All arithmetic is exact over rationals:
//   t            = 4 delta - 3
//   gamma*       = 1 / (10 + 6.5/(delta - 1))          (maximizing choice)
//   epsilon      = gamma / (1 + (8 delta - 6) gamma)
//   round expo   = 1 - gamma (8 delta + 4 + 6.5/(delta - 1))
//                    / (1 + gamma (8 delta - 6))
struct RateAnnotations {
    long two_delta = 0;
    long t = 0;
    Rational gamma;
    bool gamma_is_log_ratio = false;  // gamma came from ln q / ln n (approximate)
    Rational gamma_star;
    Rational epsilon;
    Rational round_exponent;
    std::string form = "asymptotic-form";
    std::string to_json() const;
};

// gamma precedence: explicit value, else ln q / ln n when (q, n) given, else
// the maximizing gamma*.
RateAnnotations annotate_rates(long two_delta, std::optional<Rational> gamma = std::nullopt,
                               std::optional<std::pair<long, long>> q_and_n = std::nullopt);

}  // namespace gaplab
