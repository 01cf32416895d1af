#pragma once

#include "lrsd/rng.hpp"
#include "lrsd/types.hpp"

namespace lrsd::testutil {

inline ComplexMatrix random_matrix(Rng& rng, Index rows, Index cols, double scale = 1.0) {
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = scale * rng.complex_gaussian(1.0);
        }
    }
    return m;
}

inline ComplexVector random_vector(Rng& rng, Index n, double scale = 1.0) {
    ComplexVector v(n);
    for (Index i = 0; i < n; ++i) {
        v(i) = scale * rng.complex_gaussian(1.0);
    }
    return v;
}

inline RealVector random_real_vector(Rng& rng, Index n, double scale = 1.0) {
    RealVector v(n);
    for (Index i = 0; i < n; ++i) {
        v(i) = scale * rng.gaussian_pair().first;
    }
    return v;
}

} // namespace lrsd::testutil
