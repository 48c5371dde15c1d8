#pragma once

// Standard example objects shared by the tests, the acceptance suite and the CLI samples.

#include "tropical.hpp"

namespace tropic::fixtures {

/// One trivalent vertex at the origin with legs (-1,0), (0,-1), (1,1).
inline TropicalCurve pants() {
    return TropicalCurve(2, {qvec({0, 0})}, {},
                         {{0, zvec({-1, 0}), 1}, {0, zvec({0, -1}), 1}, {0, zvec({1, 1}), 1}});
}

/// Generic tropical line in R^3 with internal edge of affine length c.
inline TropicalCurve line_vc(const Rational& c) {
    return TropicalCurve(3, {qvec({0, 0, 0}), qvec({-c, -c, 0})}, {{0, 1, zvec({-1, -1, 0}), 1}},
                         {{0, zvec({1, 0, 0}), 1},
                          {0, zvec({0, 1, 0}), 1},
                          {1, zvec({0, 0, 1}), 1},
                          {1, zvec({-1, -1, -1}), 1}});
}

/// Unit square cycle in R^2 with a diagonal ray at each corner.
inline TropicalCurve square() {
    return TropicalCurve(2, {qvec({0, 0}), qvec({1, 0}), qvec({1, 1}), qvec({0, 1})},
                         {{0, 1, zvec({1, 0}), 1}, {1, 2, zvec({0, 1}), 1}, {3, 2, zvec({1, 0}), 1}, {0, 3, zvec({0, 1}), 1}},
                         {{0, zvec({-1, -1}), 1}, {1, zvec({1, -1}), 1}, {2, zvec({1, 1}), 1}, {3, zvec({-1, 1}), 1}});
}

/// Genus-one curve in R^3 whose cycle lies in {q3 = 0}. Two legs leave the
/// square along the diagonal, with affine lengths `near` and `far`, and only
/// then turn out of the plane. Balanced and trivalent everywhere.
inline TropicalCurve planar_cycle(const Rational& near, const Rational& far) {
    std::vector<QVec> vs{qvec({0, 0, 0}), qvec({1, 0, 0}), qvec({1, 1, 0}), qvec({0, 1, 0}),
                         qvec({-near, -near, 0}), qvec({1 + far, 1 + far, 0})};
    std::vector<CurveEdge> es{{0, 1, zvec({1, 0, 0}), 1}, {1, 2, zvec({0, 1, 0}), 1},
                              {3, 2, zvec({1, 0, 0}), 1}, {0, 3, zvec({0, 1, 0}), 1},
                              {0, 4, zvec({-1, -1, 0}), 1}, {2, 5, zvec({1, 1, 0}), 1}};
    std::vector<CurveRay> rs{{1, zvec({1, -1, 0}), 1}, {3, zvec({-1, 1, 0}), 1},
                             {4, zvec({0, 0, 1}), 1},  {4, zvec({-1, -1, -1}), 1},
                             {5, zvec({0, 0, -1}), 1}, {5, zvec({1, 1, 1}), 1}};
    return TropicalCurve(3, std::move(vs), std::move(es), std::move(rs));
}

inline Hyperplane horizontal_plane() { return {zvec({0, 0, 1}), 0}; }

/// min(0, q1, q2).
inline TropicalPolynomial line_polynomial() {
    return TropicalPolynomial(2, {{zvec({0, 0}), 0}, {zvec({1, 0}), 0}, {zvec({0, 1}), 0}});
}

}  // namespace tropic::fixtures
