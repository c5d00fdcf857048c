#ifndef PS12_GEOMETRY_HPP
#define PS12_GEOMETRY_HPP

#include <Eigen/Dense>
#include <array>
#include <algorithm>
#include <stdexcept>

#include "scalar.hpp"

namespace ps12 {

template <class S>
using Point2 = Eigen::Matrix<S, 2, 1>;
template <class S>
using Vector2 = Eigen::Matrix<S, 2, 1>;
template <class S>
using Vector3 = Eigen::Matrix<S, 3, 1>;

struct DegenerateTriangle : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class S>
struct Triangle {
    std::array<Point2<S>, 3> v;

    Triangle() = default;
    Triangle(const Point2<S>& a, const Point2<S>& b, const Point2<S>& c) : v{a, b, c} {}

    const Point2<S>& operator[](int i) const { return v[size_t(i)]; }
    Point2<S>& operator[](int i) { return v[size_t(i)]; }

    S signed_area() const {
        Vector2<S> e1 = v[1] - v[0], e2 = v[2] - v[0];
        return (e1.x() * e2.y() - e1.y() * e2.x()) / 2;
    }
};

template <class S>
S cross2(const Vector2<S>& a, const Vector2<S>& b) {
    return a.x() * b.y() - a.y() * b.x();
}

/// Length scale of the triangle's bounding box, used by the float-mode
/// degeneracy threshold.
template <class S>
double bbox_scale(const Triangle<S>& T) {
    double xmin = to_double(T[0].x()), xmax = xmin, ymin = to_double(T[0].y()), ymax = ymin;
    for (int i = 1; i < 3; ++i) {
        xmin = std::min(xmin, to_double(T[i].x()));
        xmax = std::max(xmax, to_double(T[i].x()));
        ymin = std::min(ymin, to_double(T[i].y()));
        ymax = std::max(ymax, to_double(T[i].y()));
    }
    return std::max(xmax - xmin, ymax - ymin);
}

template <class S>
bool is_degenerate(const Triangle<S>& T) {
    if constexpr (ScalarTraits<S>::exact) {
        return T.signed_area() == 0;
    } else {
        double scale = bbox_scale(T);
        return std::abs(to_double(T.signed_area())) < 1e-12 * scale * scale;
    }
}

template <class S>
void require_nondegenerate(const Triangle<S>& T) {
    if (is_degenerate(T)) throw DegenerateTriangle("degenerate triangle");
}

}  // namespace ps12

#endif
