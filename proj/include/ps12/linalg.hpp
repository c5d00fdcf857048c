#ifndef PS12_LINALG_HPP
#define PS12_LINALG_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>
#include <cmath>

#include "scalar.hpp"

namespace ps12 {

template <class S>
using MatrixX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class S>
bool pivot_nonzero(const S& x) {
    if constexpr (ScalarTraits<S>::exact)
        return x != 0;
    else
        return std::abs(to_double(x)) > 1e-12;
}

// In float mode prefer the largest pivot; in exact mode any nonzero will do.
template <class S>
int pick_pivot(const MatrixX<S>& A, int col, int row_start) {
    if constexpr (ScalarTraits<S>::exact) {
        for (int r = row_start; r < A.rows(); ++r)
            if (A(r, col) != 0) return r;
        return -1;
    } else {
        int best = -1;
        double best_abs = 1e-12;
        for (int r = row_start; r < A.rows(); ++r) {
            double a = std::abs(to_double(A(r, col)));
            if (a > best_abs) {
                best = r;
                best_abs = a;
            }
        }
        return best;
    }
}

}  // namespace detail

/// Reduced row echelon form of [A | B], in place. Returns the pivot columns
/// of A. Rows of B ride along.
template <class S>
std::vector<int> rref(MatrixX<S>& A, MatrixX<S>& B) {
    const int rows = int(A.rows()), cols = int(A.cols());
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = detail::pick_pivot(A, c, r);
        if (p < 0) continue;
        if (p != r) {
            A.row(p).swap(A.row(r));
            if (B.size()) B.row(p).swap(B.row(r));
        }
        S inv = S(1) / A(r, c);
        A.row(r) *= inv;
        if (B.size()) B.row(r) *= inv;
        for (int q = 0; q < rows; ++q) {
            if (q == r) continue;
            if (ScalarTraits<S>::is_zero(A(q, c))) continue;
            S f = A(q, c);
            A.row(q) -= f * A.row(r);
            if (B.size()) B.row(q) -= f * B.row(r);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class S>
int rank(MatrixX<S> A) {
    MatrixX<S> dummy;
    return int(rref(A, dummy).size());
}

template <class S>
int nullity(const MatrixX<S>& A) {
    return int(A.cols()) - rank(A);
}

/// Columns spanning the kernel of A.
template <class S>
MatrixX<S> nullspace(MatrixX<S> A) {
    MatrixX<S> dummy;
    std::vector<int> pivots = rref(A, dummy);
    const int cols = int(A.cols());
    std::vector<bool> is_pivot(size_t(cols), false);
    for (int c : pivots) is_pivot[size_t(c)] = true;
    MatrixX<S> N = MatrixX<S>::Constant(cols, cols - int(pivots.size()), S(0));
    int out = 0;
    for (int c = 0; c < cols; ++c) {
        if (is_pivot[size_t(c)]) continue;
        N(c, out) = S(1);
        for (size_t pr = 0; pr < pivots.size(); ++pr) N(pivots[pr], out) = -A(int(pr), c);
        ++out;
    }
    return N;
}

/// Solves the (possibly overdetermined, consistent) system A X = B, requiring
/// a unique solution. Throws SingularSystem on rank deficiency or an
/// inconsistent right-hand side.
template <class S>
MatrixX<S> solve_unique(MatrixX<S> A, MatrixX<S> B) {
    const int cols = int(A.cols());
    std::vector<int> pivots = rref(A, B);
    if (int(pivots.size()) != cols) throw SingularSystem("rank-deficient system");
    // the first `cols` rows now hold the identity; the rest must have zero rhs
    for (int r = cols; r < B.rows(); ++r)
        for (int c = 0; c < B.cols(); ++c)
            if (!ScalarTraits<S>::is_zero(B(r, c))) {
                if constexpr (ScalarTraits<S>::exact)
                    throw SingularSystem("inconsistent system");
                else if (std::abs(to_double(B(r, c))) > 1e-8)
                    throw SingularSystem("inconsistent system");
            }
    return B.topRows(cols);
}

}  // namespace ps12

#endif
