#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace simplexcast {

// Calendar month, used to anchor series and Fourier phases.
struct YearMonth {
    int year = 1970;
    int month = 1;  // 1..12

    YearMonth() = default;
    YearMonth(int y, int m);

    YearMonth plus_months(int n) const;
    int months_until(const YearMonth& other) const;
    std::string str() const;  // "YYYY-MM"
    static YearMonth parse(const std::string& text);

    bool operator==(const YearMonth&) const = default;
};

// A point on the C-part simplex: nonnegative shares summing to one.
// Boundary points (exact zeros, produced only by closure of raw counts)
// are representable but rejected by every log-ratio operation; see
// with_zero_floor for the opt-in replacement policy.
class Composition {
public:
    explicit Composition(Eigen::VectorXd shares);

    int size() const { return static_cast<int>(shares_.size()); }
    const Eigen::VectorXd& shares() const { return shares_; }
    double operator[](int c) const { return shares_[c]; }

    bool is_interior() const;

    // Multiplicative zero replacement: floor every share at delta, then
    // re-close. Intended for user data that violates strict positivity.
    Composition with_zero_floor(double delta = 1e-6) const;

private:
    Eigen::VectorXd shares_;
};

// Divide a raw nonnegative vector by its total. Errors on negative
// entries or an all-zero vector; a zero entry survives closure (boundary
// composition) and is caught by downstream interiority checks.
Composition closure(const Eigen::VectorXd& raw);

// The C x (C-1) orthonormal basis of the ILR transform: columns are
// orthonormal and orthogonal to the ones vector.
class ContrastMatrix {
public:
    explicit ContrastMatrix(Eigen::MatrixXd entries);

    int parts() const { return static_cast<int>(entries_.rows()); }
    int dim() const { return static_cast<int>(entries_.cols()); }
    const Eigen::MatrixXd& matrix() const { return entries_; }

private:
    Eigen::MatrixXd entries_;
};

// Normalized Helmert sub-matrix, the default ILR basis.
ContrastMatrix build_helmert_contrast(int parts);

// ILR transform: V' log(x). Requires an interior composition.
Eigen::VectorXd ilr(const Composition& x, const ContrastMatrix& V);

// Inverse ILR: softmax(V eta), stabilized by max subtraction and floored
// at the smallest normal double so the result is always interior.
Composition ilr_inverse(const Eigen::VectorXd& eta, const ContrastMatrix& V);

// CLR transform: log(x) - mean(log(x)).
Eigen::VectorXd clr(const Composition& x);

// Aitchison distance: the Euclidean norm of clr(x) - clr(y).
double aitchison_distance(const Composition& x, const Composition& y);

// Aitchison perturbation x (+) p: componentwise product re-closed.
Composition perturb(const Composition& x, const Composition& p);

// A monthly time-indexed sequence of compositions sharing one C.
class CompositionalSeries {
public:
    CompositionalSeries(YearMonth start_month,
                        std::vector<Composition> observations,
                        std::vector<std::string> component_labels);

    int length() const { return static_cast<int>(observations_.size()); }
    int parts() const { return observations_.front().size(); }
    const YearMonth& start_month() const { return start_month_; }
    const Composition& at(int t) const { return observations_.at(t); }
    const std::vector<Composition>& observations() const { return observations_; }
    const std::vector<std::string>& component_labels() const { return labels_; }
    YearMonth month_at(int t) const { return start_month_.plus_months(t); }

    // First n observations, same start month; used by the rolling harness.
    CompositionalSeries prefix(int n) const;

private:
    YearMonth start_month_;
    std::vector<Composition> observations_;
    std::vector<std::string> labels_;
};

}  // namespace simplexcast
