#pragma once

#include <stdexcept>

namespace mdfol {

/// Numerical knobs shared across the library. All strictly positive;
/// rank_threshold is relative to the largest singular value.
struct Tolerances {
    double rank_threshold = 1e-10;
    double quad_abs_tol = 1e-9;
    double match_tol = 1e-8;
    double algebra_tol = 1e-12;

    void validate() const {
        if (!(rank_threshold > 0.0) || !(rank_threshold < 1.0))
            throw std::invalid_argument("rank_threshold must lie in (0, 1)");
        if (!(quad_abs_tol > 0.0)) throw std::invalid_argument("quad_abs_tol must be positive");
        if (!(match_tol > 0.0)) throw std::invalid_argument("match_tol must be positive");
        if (!(algebra_tol > 0.0)) throw std::invalid_argument("algebra_tol must be positive");
    }
};

}  // namespace mdfol
