#include "nonsig/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nonsig/errors.hpp"
#include "nonsig/functionals.hpp"

namespace nonsig {

namespace {

constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;
constexpr double kEndpointTol = 1e-12;
constexpr double kDerivativeFloor = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Correlator slots in the flat order a0, a1, b0, b1, c00, c01, c10, c11.
constexpr int kA0 = 0, kA1 = 1, kB0 = 2, kB1 = 3;
constexpr int corr_slot(int x, int y) { return 4 + 2 * x + y; }

using Basis = Eigen::Matrix<double, 8, Eigen::Dynamic, 0, 8, 8>;

// Free coordinates of a slice before the CHSH equality is imposed.
Basis slice_basis(SetKind set, bool marginals_only) {
    Basis b;
    switch (set) {
        case SetKind::NS:
            if (marginals_only) {
                b = Basis::Zero(8, 4);
                for (int k = 0; k < 4; ++k) b(k, k) = 1.0;
            } else {
                b = Basis::Identity(8, 8);
            }
            break;
        case SetKind::SYM:
            b = Basis::Zero(8, marginals_only ? 2 : 5);
            b(kA0, 0) = b(kB0, 0) = 1.0;
            b(kA1, 1) = b(kB1, 1) = 1.0;
            if (!marginals_only) {
                b(corr_slot(0, 0), 2) = 1.0;
                b(corr_slot(0, 1), 3) = b(corr_slot(1, 0), 3) = 1.0;
                b(corr_slot(1, 1), 4) = 1.0;
            }
            break;
        case SetKind::C:
            b = Basis::Zero(8, marginals_only ? 0 : 4);
            if (!marginals_only)
                for (int k = 0; k < 4; ++k) b(4 + k, k) = 1.0;
            break;
    }
    return b;
}

Vec8 chsh_row(int slot) {
    const auto e = chsh_sign_pattern(slot);
    Vec8 row = Vec8::Zero();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) row(corr_slot(x, y)) = e[x][y];
    return row;
}

Vec8 isotropic_point(double s) {
    Vec8 c = Vec8::Zero();
    const double q = s / 4.0;
    c(corr_slot(0, 0)) = q;
    c(corr_slot(0, 1)) = q;
    c(corr_slot(1, 0)) = q;
    c(corr_slot(1, 1)) = -q;
    return c;
}

}  // namespace

std::string to_string(SetKind set) {
    switch (set) {
        case SetKind::NS: return "ns";
        case SetKind::SYM: return "sym";
        case SetKind::C: return "c";
    }
    return "?";
}

std::optional<SetKind> parse_set_kind(const std::string& name) {
    if (name == "ns") return SetKind::NS;
    if (name == "sym") return SetKind::SYM;
    if (name == "c") return SetKind::C;
    return std::nullopt;
}

std::pair<double, double> feasible_s_range(SetKind, Relaxation relaxation) noexcept {
    return {0.0, relaxation == Relaxation::QTilde ? kTsirelson : 4.0};
}

Vec8 to_vec8(const Correlators& c) noexcept {
    const auto f = c.flat();
    return Vec8(f.data());
}

Correlators from_vec8(const Vec8& v) noexcept {
    std::array<double, 8> f{};
    for (int k = 0; k < 8; ++k) f[static_cast<std::size_t>(k)] = v(k);
    return Correlators::from_flat(f);
}

SearchSpace::SearchSpace(SetKind set, double s, Relaxation relaxation)
    : set_(set), relaxation_(relaxation), s_(s) {
    const auto [lo, hi] = feasible_s_range(set, relaxation);
    if (!(s >= lo - kEndpointTol && s <= hi + kEndpointTol)) {
        std::ostringstream os;
        os << "S = " << s << " is infeasible for set " << to_string(set) << " (range [" << lo << ", " << hi << "])";
        throw DomainError(os.str());
    }
    s_ = std::clamp(s, lo, hi);

    // At the ends of the range the slice collapses onto fixed correlations:
    // S = 0 forces all <A_xB_y> = 0, S = 4 forces the PR box, and the arcsin
    // relaxation at the Tsirelson bound forces the Bell correlations.
    const bool at_zero = s_ <= kEndpointTol;
    const bool at_pr = relaxation == Relaxation::None && s_ >= 4.0 - kEndpointTol;
    const bool at_bell = relaxation == Relaxation::QTilde && s_ >= kTsirelson - kEndpointTol;

    if (at_pr) {
        offset_ = to_vec8(named_correlators(NamedTag::PR));
        basis_ = Basis::Zero(8, 0);
    } else if (at_zero || at_bell) {
        offset_ = at_zero ? Vec8::Zero() : to_vec8(named_correlators(NamedTag::Bell));
        basis_ = slice_basis(set, true);
    } else {
        const Basis free = slice_basis(set, false);
        const Eigen::VectorXd normal = free.transpose() * chsh_row(0);
        const Eigen::VectorXd particular = s_ * normal / normal.squaredNorm();
        const Eigen::MatrixXd q = normal.householderQr().householderQ();
        const Eigen::MatrixXd null = q.rightCols(normal.size() - 1);
        offset_ = free * particular;
        basis_ = free * null;
    }

    const int d = dim();
    gram_inverse_ = d > 0 ? MatZ((basis_.transpose() * basis_).inverse()) : MatZ(0, 0);

    auto to_z = [&](const Vec8& coef_c, double off_c) {
        Affine t;
        t.offset = off_c + coef_c.dot(offset_);
        t.coef = basis_.transpose() * coef_c;
        return t;
    };

    for (int x = 0; x < 2; ++x)
        for (int ia = 0; ia < 2; ++ia) {
            Vec8 coef = Vec8::Zero();
            coef(x == 0 ? kA0 : kA1) = 0.5 * outcome_value(ia);
            info_terms_.push_back(to_z(coef, 0.5));
            info_weights_.push_back(-0.5);
        }
    for (int y = 0; y < 2; ++y)
        for (int ib = 0; ib < 2; ++ib) {
            Vec8 coef = Vec8::Zero();
            coef(y == 0 ? kB0 : kB1) = 0.5 * outcome_value(ib);
            info_terms_.push_back(to_z(coef, 0.5));
            info_weights_.push_back(-0.5);
        }
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    const double a = outcome_value(ia);
                    const double b = outcome_value(ib);
                    Vec8 coef = Vec8::Zero();
                    coef(x == 0 ? kA0 : kA1) = 0.25 * a;
                    coef(y == 0 ? kB0 : kB1) = 0.25 * b;
                    coef(corr_slot(x, y)) = 0.25 * a * b;
                    const Affine term = to_z(coef, 0.25);
                    info_terms_.push_back(term);
                    info_weights_.push_back(0.25);
                    add_linear_constraint(-coef, 0.25);  // p(ab|xy) >= 0
                }
    for (int slot = 1; slot < kChshSlots; ++slot) add_linear_constraint(chsh_row(slot), s_);

    if (relaxation_ == Relaxation::QTilde) {
        arcsin_active_ = d > 0 && basis_.bottomRows(4).cwiseAbs().maxCoeff() > 1e-14;
        if (!arcsin_active_) {
            // Correlations are fixed; the inequalities are constants.
            for (int k = 0; k < kChshSlots; ++k)
                if (nonlinear_slack(offset_, k) < -1e-9) throw DomainError("arcsin relaxation infeasible at this S");
        }
    }

    if (at_pr || at_zero || at_bell) {
        center_ = VecZ::Zero(d);
    } else {
        center_ = coordinates(from_vec8(isotropic_point(s_)));
    }
}

void SearchSpace::add_linear_constraint(const Vec8& row, double rhs) {
    Affine slack;
    slack.offset = rhs - row.dot(offset_);
    slack.coef = -(basis_.transpose() * row);
    if (slack.coef.size() == 0 || slack.coef.cwiseAbs().maxCoeff() < 1e-14) {
        if (slack.offset < -1e-9) throw DomainError("constraint slice is infeasible at this S");
        return;  // constant, satisfied
    }
    linear_slacks_.push_back(std::move(slack));
}

int SearchSpace::constraint_count() const noexcept {
    return static_cast<int>(linear_slacks_.size()) + (arcsin_active_ ? kChshSlots : 0);
}

Correlators SearchSpace::correlators(const VecZ& z) const {
    if (dim() == 0) return from_vec8(offset_);
    return from_vec8(offset_ + basis_ * z);
}

VecZ SearchSpace::coordinates(const Correlators& c) const {
    if (dim() == 0) return VecZ::Zero(0);
    const Vec8 delta = to_vec8(c) - offset_;
    return gram_inverse_ * (basis_.transpose() * delta);
}

bool SearchSpace::contains_affinely(const Correlators& c, double tol) const {
    const Vec8 back = to_vec8(correlators(coordinates(c)));
    return (back - to_vec8(c)).cwiseAbs().maxCoeff() <= tol;
}

double SearchSpace::nonlinear_slack(const Vec8& c, int k) const {
    const auto e = chsh_sign_pattern(k);
    double h = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const double v = c(corr_slot(x, y));
            if (std::abs(v) > 1.0) return -kInf;
            h += e[x][y] * std::asin(v);
        }
    return std::numbers::pi - h;
}

double SearchSpace::min_slack(const VecZ& z) const {
    double worst = kInf;
    for (const auto& sl : linear_slacks_) worst = std::min(worst, sl.offset + sl.coef.dot(z));
    if (arcsin_active_) {
        const Vec8 c = offset_ + basis_ * z;
        for (int k = 0; k < kChshSlots; ++k) worst = std::min(worst, nonlinear_slack(c, k));
    }
    return worst;
}

double SearchSpace::max_step(const VecZ& z, const VecZ& dir) const {
    double alpha = kInf;
    for (const auto& sl : linear_slacks_) {
        const double rate = sl.coef.dot(dir);
        if (rate < 0.0) alpha = std::min(alpha, (sl.offset + sl.coef.dot(z)) / -rate);
    }
    if (arcsin_active_ && std::isfinite(alpha)) {
        // The arcsin region is bounded by the positivity box; bisect on the
        // first crossing found by a coarse march.
        constexpr int kMarch = 16;
        double lo = 0.0;
        for (int k = 1; k <= kMarch; ++k) {
            const double trial = alpha * k / kMarch * (1.0 - 1e-12);
            if (min_slack(z + trial * dir) <= 0.0) {
                double hi = trial;
                for (int it = 0; it < 50; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (min_slack(z + mid * dir) > 0.0 ? lo : hi) = mid;
                }
                return lo;
            }
            lo = trial;
        }
    }
    return alpha;
}

ObjectiveValue SearchSpace::information(const VecZ& z) const {
    const int d = dim();
    ObjectiveValue out;
    out.gradient = VecZ::Zero(d);
    out.hessian = MatZ::Zero(d, d);
    const double inv_ln2 = 1.0 / std::numbers::ln2;
    for (std::size_t k = 0; k < info_terms_.size(); ++k) {
        const auto& t = info_terms_[k];
        const double wgt = info_weights_[k];
        const double u = d > 0 ? t.offset + t.coef.dot(z) : t.offset;
        out.value += wgt * xlog2x(u);
        if (d == 0) continue;
        const double uf = std::max(u, kDerivativeFloor);
        out.gradient += (wgt * (std::log(uf) + 1.0) * inv_ln2) * t.coef;
        out.hessian.noalias() += (wgt * inv_ln2 / uf) * (t.coef * t.coef.transpose());
    }
    return out;
}

ObjectiveValue SearchSpace::barrier(const VecZ& z) const {
    const int d = dim();
    ObjectiveValue out;
    out.gradient = VecZ::Zero(d);
    out.hessian = MatZ::Zero(d, d);
    for (const auto& sl : linear_slacks_) {
        const double v = sl.offset + sl.coef.dot(z);
        if (!(v > 0.0)) {
            out.value = kInf;
            return out;
        }
        out.value -= std::log(v);
        out.gradient -= sl.coef / v;
        out.hessian.noalias() += (sl.coef * sl.coef.transpose()) / (v * v);
    }
    if (arcsin_active_) {
        const Vec8 c = offset_ + basis_ * z;
        for (int k = 0; k < kChshSlots; ++k) {
            const auto e = chsh_sign_pattern(k);
            double h = 0.0;
            Vec8 dh = Vec8::Zero();
            Vec8 d2h = Vec8::Zero();
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    const int slot = corr_slot(x, y);
                    const double v = c(slot);
                    if (!(std::abs(v) < 1.0)) {
                        out.value = kInf;
                        return out;
                    }
                    const double r = 1.0 - v * v;
                    h += e[x][y] * std::asin(v);
                    dh(slot) = e[x][y] / std::sqrt(r);
                    d2h(slot) = e[x][y] * v / (r * std::sqrt(r));
                }
            const double slack = std::numbers::pi - h;
            if (!(slack > 0.0)) {
                out.value = kInf;
                return out;
            }
            const VecZ gz = basis_.transpose() * dh;
            out.value -= std::log(slack);
            out.gradient += gz / slack;
            out.hessian.noalias() += (gz * gz.transpose()) / (slack * slack);
            out.hessian.noalias() += (basis_.transpose() * d2h.asDiagonal() * basis_) / slack;
        }
    }
    return out;
}

VecZ SearchSpace::random_point(std::mt19937_64& rng, int hit_and_run_steps) const {
    const int d = dim();
    if (d == 0) return VecZ::Zero(0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto direction = [&] {
        VecZ dir(d);
        for (int k = 0; k < d; ++k) dir(k) = normal(rng);
        return VecZ(dir / dir.norm());
    };

    VecZ z = center_;
    {
        const VecZ dir = direction();
        double reach = max_step(z, dir);
        if (!std::isfinite(reach)) reach = 1.0;
        const double radius = std::pow(unit(rng), 1.0 / d);
        const VecZ trial = z + (0.999 * radius * reach) * dir;
        if (strictly_feasible(trial)) z = trial;
    }
    for (int step = 0; step < hit_and_run_steps; ++step) {
        const VecZ dir = direction();
        const double fwd = max_step(z, dir);
        const double bwd = max_step(z, VecZ(-dir));
        if (!std::isfinite(fwd) || !std::isfinite(bwd)) continue;
        const double t = 0.999 * (-bwd + (fwd + bwd) * unit(rng));
        const VecZ trial = z + t * dir;
        if (strictly_feasible(trial)) z = trial;
    }
    return z;
}

}  // namespace nonsig
