#include "simplexcast/composition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "simplexcast/errors.hpp"

namespace simplexcast {

namespace {
constexpr double kUnitSumTol = 1e-10;
}

YearMonth::YearMonth(int y, int m) : year(y), month(m) {
    if (m < 1 || m > 12) throw data_error("month must be in 1..12");
}

YearMonth YearMonth::plus_months(int n) const {
    long idx = static_cast<long>(year) * 12 + (month - 1) + n;
    long y = idx / 12;
    long m = idx % 12;
    if (m < 0) {
        m += 12;
        y -= 1;
    }
    return YearMonth(static_cast<int>(y), static_cast<int>(m) + 1);
}

int YearMonth::months_until(const YearMonth& other) const {
    return (other.year - year) * 12 + (other.month - month);
}

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

YearMonth YearMonth::parse(const std::string& text) {
    if (text.size() != 7 || text[4] != '-')
        throw data_error("month '" + text + "' is not formatted YYYY-MM");
    for (int i : {0, 1, 2, 3, 5, 6}) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw data_error("month '" + text + "' is not formatted YYYY-MM");
    }
    const int y = std::stoi(text.substr(0, 4));
    const int m = std::stoi(text.substr(5, 2));
    if (m < 1 || m > 12) throw data_error("month '" + text + "' is out of range");
    return YearMonth(y, m);
}

Composition::Composition(Eigen::VectorXd shares) : shares_(std::move(shares)) {
    if (shares_.size() < 2) throw data_error("composition needs at least 2 parts");
    if (!shares_.allFinite()) throw data_error("composition has non-finite shares");
    if ((shares_.array() < 0.0).any())
        throw data_error("composition has negative shares");
    const double total = shares_.sum();
    if (std::fabs(total - 1.0) > kUnitSumTol)
        throw data_error("composition shares do not sum to 1");
    shares_ /= total;
}

bool Composition::is_interior() const { return (shares_.array() > 0.0).all(); }

Composition Composition::with_zero_floor(double delta) const {
    if (!(delta > 0.0)) throw data_error("zero floor must be positive");
    Eigen::VectorXd floored = shares_.cwiseMax(delta);
    return closure(floored);
}

Composition closure(const Eigen::VectorXd& raw) {
    if (raw.size() < 2) throw data_error("composition needs at least 2 parts");
    if (!raw.allFinite()) throw data_error("closure input has non-finite entries");
    if ((raw.array() < 0.0).any())
        throw data_error("closure input has negative entries");
    const double total = raw.sum();
    if (!(total > 0.0)) throw data_error("closure input is all zero");
    return Composition(raw / total);
}

ContrastMatrix::ContrastMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    const auto C = entries_.rows();
    if (C < 2 || entries_.cols() != C - 1)
        throw data_error("contrast matrix must be C x (C-1) with C >= 2");
    const Eigen::MatrixXd gram = entries_.transpose() * entries_;
    const double ortho_err =
        (gram - Eigen::MatrixXd::Identity(C - 1, C - 1)).cwiseAbs().maxCoeff();
    if (ortho_err > 1e-12)
        throw data_error("contrast matrix columns are not orthonormal");
    const double ones_err =
        (entries_.transpose() * Eigen::VectorXd::Ones(C)).cwiseAbs().maxCoeff();
    if (ones_err > 1e-12)
        throw data_error("contrast matrix columns are not orthogonal to 1");
}

ContrastMatrix build_helmert_contrast(int parts) {
    if (parts < 2) throw data_error("contrast matrix requires C >= 2");
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(parts, parts - 1);
    for (int k = 0; k < parts - 1; ++k) {
        const double norm = std::sqrt(static_cast<double>(k + 1) * (k + 2));
        for (int i = 0; i <= k; ++i) V(i, k) = 1.0 / norm;
        V(k + 1, k) = -(k + 1.0) / norm;
    }
    return ContrastMatrix(std::move(V));
}

namespace {

void require_interior(const Composition& x) {
    if (!x.is_interior())
        throw data_error("zero component; see zero-handling policy");
}

}  // namespace

Eigen::VectorXd ilr(const Composition& x, const ContrastMatrix& V) {
    require_interior(x);
    if (V.parts() != x.size())
        throw data_error("contrast matrix does not match composition size");
    return V.matrix().transpose() * x.shares().array().log().matrix();
}

Composition ilr_inverse(const Eigen::VectorXd& eta, const ContrastMatrix& V) {
    if (eta.size() != V.dim())
        throw data_error("eta length does not match contrast matrix");
    if (!eta.allFinite()) throw data_error("eta has non-finite entries");
    Eigen::VectorXd logits = V.matrix() * eta;
    logits.array() -= logits.maxCoeff();
    Eigen::VectorXd expd =
        logits.array().exp().max(std::numeric_limits<double>::min()).matrix();
    return closure(expd);
}

Eigen::VectorXd clr(const Composition& x) {
    require_interior(x);
    Eigen::VectorXd logx = x.shares().array().log().matrix();
    return logx.array() - logx.mean();
}

double aitchison_distance(const Composition& x, const Composition& y) {
    if (x.size() != y.size())
        throw data_error("aitchison_distance: dimension mismatch");
    return (clr(x) - clr(y)).norm();
}

Composition perturb(const Composition& x, const Composition& p) {
    if (x.size() != p.size()) throw data_error("perturb: dimension mismatch");
    return closure(x.shares().cwiseProduct(p.shares()));
}

CompositionalSeries::CompositionalSeries(YearMonth start_month,
                                         std::vector<Composition> observations,
                                         std::vector<std::string> component_labels)
    : start_month_(start_month),
      observations_(std::move(observations)),
      labels_(std::move(component_labels)) {
    if (observations_.empty()) throw data_error("series must have T >= 1");
    const int C = observations_.front().size();
    for (const auto& obs : observations_) {
        if (obs.size() != C)
            throw data_error("series observations have inconsistent part counts");
    }
    if (static_cast<int>(labels_.size()) != C)
        throw data_error("series needs one label per component");
    std::set<std::string> unique(labels_.begin(), labels_.end());
    if (static_cast<int>(unique.size()) != C)
        throw data_error("component labels must be unique");
}

CompositionalSeries CompositionalSeries::prefix(int n) const {
    if (n < 1 || n > length())
        throw data_error("prefix length out of range");
    return CompositionalSeries(
        start_month_, std::vector<Composition>(observations_.begin(), observations_.begin() + n),
        labels_);
}

}  // namespace simplexcast
