#include "utf/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include "utf/calculus.hpp"
#include "utf/errors.hpp"
#include "utf/generators.hpp"
#include "utf/json_io.hpp"
#include "utf/linalg.hpp"
#include "utf/rng.hpp"
#include "utf/tracial.hpp"

namespace utf {

void CheckResult::gate() {
    passed = true;
    for (const ResidualEntry& r : residuals)
        if (!(r.value <= r.allowance)) passed = false;
}

namespace {

ResidualEntry entry(std::string name, double value, double allowance) {
    return ResidualEntry{std::move(name), value, allowance};
}

double rel_scale(const Matrix& m) { return std::max(1.0, m.frobenius_norm()); }

Matrix mat_pow(const Matrix& q, int m) {
    Matrix acc = Matrix::identity(q.dim());
    for (int i = 0; i < m; ++i) acc = acc * q;
    return acc;
}

// Nilpotency witnessed in a triangularizing basis: the diagonal magnitude is
// the spectral radius of the triangular truncation, and the mass on or below
// the diagonal is the distance to an exactly nilpotent matrix.  This stays
// meaningful at sizes where ambient eigenvalues of a near-nilpotent matrix
// scatter like eps^{1/n}.
struct BasisWitness {
    double diag_radius;
    double lower_defect;  // Frobenius mass of the non-strictly-upper part
};

BasisWitness basis_witness(const Matrix& q, const Matrix& basis) {
    const Matrix c = basis.adjoint() * q * basis;
    const int n = c.dim();
    double rad = 0.0;
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
        rad = std::max(rad, std::abs(c(i, i)));
        for (int j = 0; j <= i; ++j) mass += std::norm(c(i, j));
    }
    return {rad, std::sqrt(mass)};
}

// Upper bound on ||q^n||^{1/n} implied by q = S + E with S strictly upper
// (S^n = 0) and ||E|| <= defect_gate:
//   ||q^n|| <= n * ||E|| * (||S|| + ||E||)^{n-1}.
double norm_root_allowance(int n, double defect_gate, double q_norm) {
    const double s = q_norm + defect_gate;
    return 2.0 * std::pow(n * defect_gate, 1.0 / n) * std::pow(s, (n - 1.0) / n) + defect_gate;
}

std::string format_scalar(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

CheckResult check_functional_calculus_split(const Matrix& t, const HoloFunction& h,
                                            double tol_scale) {
    CheckResult out;
    out.name = "functional-calculus-split";
    out.tolerance = 1e-8 * tol_scale;

    const Decomposition d = decompose(t, OrderingTag::modulus_then_argument());
    const Matrix ht = calc_triangular(t, h);
    const double scale_h = rel_scale(ht);

    const Contour contour = auto_contour(eigenvalues(t), h, 256);
    const Matrix ht_quad = calc_contour(t, h, contour);
    out.residuals.push_back(entry("cross-method-disagreement",
                                  (ht - ht_quad).frobenius_norm() / scale_h, 1e-8 * tol_scale));

    const Matrix hn = calc_normal(d.n_part, h);
    const Matrix qh = ht - hn;
    const BasisWitness w = basis_witness(qh, d.flag.basis);
    out.residuals.push_back(entry("spectral-radius", w.diag_radius / scale_h, 1e-8 * tol_scale));
    out.residuals.push_back(
        entry("strict-upper-defect", w.lower_defect / scale_h, 1e-8 * tol_scale));

    const int n = t.dim();
    const double nr = quasinilpotency_profile(qh, n).norms.back();
    out.residuals.push_back(entry(
        "norm-root", nr,
        norm_root_allowance(n, 1e-8 * tol_scale * scale_h, operator_norm(qh)) * tol_scale));

    const BrownMeasure pushed = pushforward(brown_measure(t), h);
    const double pf = match_distance(brown_measure(ht), pushed);
    out.residuals.push_back(entry("pushforward-distance", pf / scale_h, 1e-6 * tol_scale));

    out.gate();
    return out;
}

CheckResult check_multiplicative_form(const Matrix& t, double tol_scale) {
    CheckResult out;
    out.name = "multiplicative-form";
    out.tolerance = 1e-9 * tol_scale;

    const Decomposition d = decompose(t, OrderingTag::modulus_then_argument());
    const Matrix x = multiplicative_form(d);  // throws ZeroInSupport when N is near-singular

    const Matrix recon = d.n_part * (Matrix::identity(t.dim()) + x);
    out.residuals.push_back(
        entry("reconstruction", (recon - t).frobenius_norm() / rel_scale(t), 1e-9 * tol_scale));

    const BasisWitness w = basis_witness(x, d.flag.basis);
    const double scale_x = rel_scale(x);
    out.residuals.push_back(entry("spectral-radius", w.diag_radius / scale_x, 1e-8 * tol_scale));
    out.residuals.push_back(
        entry("strict-upper-defect", w.lower_defect / scale_x, 1e-8 * tol_scale));

    out.gate();
    return out;
}

CheckResult check_inverse_perturbation(const Matrix& n_matrix, const Matrix& q,
                                       double tol_scale) {
    if (!equal_dims(n_matrix, q))
        throw DimensionMismatch("check_inverse_perturbation needs equal dimensions");
    CheckResult out;
    out.name = "inverse-perturbation-identity";
    out.tolerance = 1e-9 * tol_scale;

    const Matrix t = n_matrix + q;
    const Matrix tinv = inverse(t);         // throws SingularMatrix
    const Matrix ninv = inverse(n_matrix);  // throws SingularMatrix
    const Matrix rhs = ninv - tinv * q * ninv;
    out.residuals.push_back(
        entry("identity", (tinv - rhs).frobenius_norm() / rel_scale(tinv), 1e-9 * tol_scale));

    out.gate();
    return out;
}

CheckResult check_commuting_nilpotent_product(const Matrix& a, const Matrix& q,
                                              double tol_scale) {
    if (!equal_dims(a, q))
        throw DimensionMismatch("check_commuting_nilpotent_product needs equal dimensions");
    CheckResult out;
    out.name = "commuting-nilpotent-product";
    out.tolerance = 1e-8 * tol_scale;
    const int n = a.dim();

    const double comm = (a * q - q * a).frobenius_norm();
    if (comm > 1e-10 * std::max(a.frobenius_norm() * q.frobenius_norm(), 1e-300))
        throw NotCommuting("A and Q do not commute (defect " + format_scalar(comm) + ")");
    const NilpotencyWitness wq = is_nilpotent(q, 1e-8 * tol_scale);
    if (!wq.nilpotent)
        throw NotNilpotent("Q is not nilpotent (spectral radius " +
                           format_scalar(wq.spectral_radius) + ")");

    const Matrix aq = a * q;
    const double scale_aq = rel_scale(aq);
    const NilpotencyWitness w = is_nilpotent(aq, 1e-8 * tol_scale);
    out.residuals.push_back(
        entry("product-spectral-radius", w.spectral_radius / scale_aq, 1e-8 * tol_scale));
    out.residuals.push_back(entry(
        "product-norm-root", w.norm_root,
        norm_root_allowance(n, 1e-8 * tol_scale * scale_aq, operator_norm(aq)) * tol_scale));

    // positive semidefinite ordering:
    //   ||A||^4 ((Q*)^m Q^m)^{2/m} >= ((AQ)*)^m (AQ)^m)^{2/m} for m = 2..n
    const double a_op4 = std::pow(operator_norm(a), 4.0);
    const double q_op = operator_norm(q);
    double defect = 0.0;
    for (int m = 2; m <= n; ++m) {
        const Matrix qm = mat_pow(q, m);
        const Matrix aqm = mat_pow(aq, m);
        const Matrix lhs = psd_power(qm.adjoint() * qm, 2.0 / m) * Complex(a_op4, 0.0);
        const Matrix rhs = psd_power(aqm.adjoint() * aqm, 2.0 / m);
        const std::vector<double> eigs = hermitian_eigen(lhs - rhs).second;
        defect = std::max(defect, std::max(0.0, -eigs.front()));
    }
    out.residuals.push_back(entry("loewner-defect", defect,
                                  1e-8 * tol_scale * std::max(1.0, a_op4 * std::pow(q_op, 4.0))));

    out.gate();
    return out;
}

CheckResult check_commuting_pair_calculus(const Matrix& n_matrix, const Matrix& q,
                                          const HoloFunction& h, double tol_scale) {
    if (!equal_dims(n_matrix, q))
        throw DimensionMismatch("check_commuting_pair_calculus needs equal dimensions");
    CheckResult out;
    out.name = "commuting-pair-calculus";
    out.tolerance = 1e-8 * tol_scale;

    const double comm = (n_matrix * q - q * n_matrix).frobenius_norm();
    if (comm > 1e-10 * std::max(n_matrix.frobenius_norm() * q.frobenius_norm(), 1e-300))
        throw NotCommuting("N and Q do not commute (defect " + format_scalar(comm) + ")");
    // ambient eigenvalues of a conjugated 2-block nilpotent scatter around
    // sqrt(eps), so the precondition gate is looser than the residual gates
    const NilpotencyWitness wq = is_nilpotent(q, 1e-6 * tol_scale);
    if (!wq.nilpotent)
        throw NotNilpotent("Q is not nilpotent (spectral radius " +
                           format_scalar(wq.spectral_radius) + ")");

    const Matrix t = n_matrix + q;
    const Matrix ht = calc_triangular(t, h);
    const Matrix hn = calc_normal(n_matrix, h);
    const double scale_h = rel_scale(ht);

    out.residuals.push_back(entry(
        "commutator", (ht * hn - hn * ht).frobenius_norm() /
                          std::max(1.0, ht.frobenius_norm() * hn.frobenius_norm()),
        1e-8 * tol_scale));

    const Matrix diff = ht - hn;
    out.residuals.push_back(
        entry("difference-spectral-radius", spectral_radius(diff) / scale_h, 1e-6 * tol_scale));

    std::vector<Complex> pts = eigenvalues(t);
    {
        const std::vector<Complex> en = eigenvalues(n_matrix);
        pts.insert(pts.end(), en.begin(), en.end());
    }
    const Contour contour = auto_contour(pts, h, 256);
    const Matrix a = calc_pair_contour(t, n_matrix, h, contour);
    out.residuals.push_back(
        entry("factorization", (diff - a * q).frobenius_norm() / scale_h, 1e-8 * tol_scale));
    out.residuals.push_back(
        entry("factor-commutation", (a * q - q * a).frobenius_norm() /
                                        std::max(1.0, a.frobenius_norm() * q.frobenius_norm()),
              1e-8 * tol_scale));

    out.gate();
    return out;
}

CheckResult check_corner_calculus(const Matrix& t, const Projection& p, const HoloFunction& h,
                                  double tol_scale) {
    if (p.dim() != t.dim()) throw DimensionMismatch("projection dimension mismatch");
    if (p.rank() <= 0 || p.rank() >= t.dim())
        throw InvalidInput("corner calculus needs a proper projection (rank strictly between 0 "
                           "and n)");
    CheckResult out;
    out.name = "corner-calculus";
    out.tolerance = 1e-8 * tol_scale;

    const auto [ok, inv_residual] = is_invariant(t, p, 1e-8);
    if (!ok)
        throw NotInvariant("projection is not invariant under the matrix (residual " +
                           format_scalar(inv_residual) + ")");

    const Matrix binv = block_inverse(t, p);  // throws SingularCorner
    const Matrix tinv = inverse(t);
    out.residuals.push_back(entry("block-inverse",
                                  (binv - tinv).frobenius_norm() / rel_scale(tinv),
                                  1e-8 * tol_scale * cond_factor(t)));

    std::vector<Complex> corner_spectra = eigenvalues(corner(t, p));
    {
        const std::vector<Complex> rest = eigenvalues(corner(t, p.complement()));
        corner_spectra.insert(corner_spectra.end(), rest.begin(), rest.end());
    }
    out.residuals.push_back(entry(
        "spectra-union", match_distance(corner_spectra, eigenvalues(t)), 1e-6 * tol_scale));

    const Matrix ht = calc_triangular(t, h);
    out.residuals.push_back(
        entry("calculus-invariance", is_invariant(ht, p, 1e-8).second, 1e-8 * tol_scale));

    const Matrix hc = calc_triangular(corner(t, p), h);
    out.residuals.push_back(entry(
        "corner-match", (ht * p.matrix() - embed_corner(hc, p)).frobenius_norm() / rel_scale(ht),
        1e-8 * tol_scale));

    out.gate();
    return out;
}

CheckResult check_block_expectation_calculus(const Matrix& t, const Flag& f,
                                             const HoloFunction& h, double tol_scale) {
    if (f.basis.dim() != t.dim()) throw DimensionMismatch("flag dimension mismatch");
    CheckResult out;
    out.name = "block-expectation-calculus";
    out.tolerance = 1e-8 * tol_scale;

    for (int j = 1; j < f.blocks(); ++j) {
        const auto [ok, res] = is_invariant(t, f.projection(j), 1e-8);
        if (!ok)
            throw NotInvariant("flag projection " + std::to_string(j) +
                               " is not invariant (residual " + format_scalar(res) + ")");
    }

    const Matrix et = exp_onto_blocks(t, f);
    out.residuals.push_back(
        entry("spectra-match", match_distance(eigenvalues(et), eigenvalues(t)),
              1e-6 * tol_scale));

    try {
        const Matrix tinv = inverse(t);
        const Matrix etinv = inverse(et);
        out.residuals.push_back(
            entry("inverse-expectation",
                  (exp_onto_blocks(tinv, f) - etinv).frobenius_norm() / rel_scale(etinv),
                  1e-8 * tol_scale * cond_factor(t)));
    } catch (const SingularMatrix&) {
        out.details = "matrix singular; inverse identity not applicable";
    }

    const Matrix ht = calc_triangular(t, h);
    const Matrix het = calc_triangular(et, h);
    out.residuals.push_back(
        entry("calculus-expectation",
              (exp_onto_blocks(ht, f) - het).frobenius_norm() / rel_scale(het),
              1e-8 * tol_scale));

    out.gate();
    return out;
}

CheckResult check_determinant_compression(const Matrix& t, const Flag& f, int trials,
                                          std::uint64_t seed, double tol_scale) {
    if (f.basis.dim() != t.dim()) throw DimensionMismatch("flag dimension mismatch");
    if (trials < 1) throw InvalidInput("determinant check needs at least one trial");
    CheckResult out;
    out.name = "determinant-compression";
    out.tolerance = 1e-7 * tol_scale;

    for (int j = 1; j < f.blocks(); ++j) {
        const auto [ok, res] = is_invariant(t, f.projection(j), 1e-8);
        if (!ok)
            throw NotInvariant("flag projection " + std::to_string(j) +
                               " is not invariant (residual " + format_scalar(res) + ")");
    }

    const Matrix et = exp_onto_blocks(t, f);
    const std::vector<Complex> eigs = eigenvalues(t);
    const double radius = 2.0 * operator_norm(t);
    // lambda too close to the spectrum makes both determinants collapse
    // through the zero clamp; keep a small standoff so ratios stay finite
    const double standoff = 1e-3 * (1.0 + t.frobenius_norm());

    Rng rng = Rng(seed).derive("lambda-draws");
    double worst = 0.0;
    int used = 0;
    int attempts = 0;
    const int max_attempts = 200 * trials;
    while (used < trials && attempts < max_attempts) {
        ++attempts;
        const Complex lambda = std::sqrt(rng.uniform01()) * radius * rng.unit_phase();
        double d_spec = std::numeric_limits<double>::infinity();
        for (Complex e : eigs) d_spec = std::min(d_spec, std::abs(lambda - e));
        if (d_spec < standoff) continue;
        const double d1 = fk_determinant(shift(t, lambda));
        const double d2 = fk_determinant(shift(et, lambda));
        worst = std::max(worst, std::abs(d1 - d2) / std::max(d1, 1e-14));
        ++used;
    }
    out.details = "lambda draws used " + std::to_string(used) + " of " +
                  std::to_string(attempts) + " attempts";
    if (used < trials)
        throw InvalidInput("could not place " + std::to_string(trials) +
                           " sample points away from the spectrum");
    out.residuals.push_back(entry("determinant-agreement", worst, 1e-7 * tol_scale));

    out.residuals.push_back(entry(
        "brown-match", match_distance(brown_measure(t), brown_measure(et)), 1e-6 * tol_scale));

    out.gate();
    return out;
}

// ---------------------------------------------------------------------------
// suite
// ---------------------------------------------------------------------------

namespace {

bool is_precondition_error(const std::exception& e) {
    return dynamic_cast<const ZeroInSupport*>(&e) || dynamic_cast<const NotCommuting*>(&e) ||
           dynamic_cast<const NotNilpotent*>(&e) || dynamic_cast<const NotInvariant*>(&e) ||
           dynamic_cast<const SingularCorner*>(&e) || dynamic_cast<const SingularMatrix*>(&e) ||
           dynamic_cast<const SingularityHit*>(&e) || dynamic_cast<const NoValidContour*>(&e) ||
           dynamic_cast<const ClusterTooLarge*>(&e) || dynamic_cast<const InvalidInput*>(&e);
}

CheckResult skipped_result(std::string name, std::string reason) {
    CheckResult out;
    out.name = std::move(name);
    out.passed = true;
    out.skipped = true;
    out.details = std::move(reason);
    return out;
}

CheckResult failed_result(std::string name, std::string reason) {
    CheckResult out;
    out.name = std::move(name);
    out.passed = false;
    out.details = std::move(reason);
    return out;
}

}  // namespace

VerificationReport run_suite(const Matrix& t, const HoloFunction& h, const VerifyConfig& config) {
    const int n = t.dim();
    const double ts = config.tol_scale;
    const Rng root(config.seed);

    // Derived inputs are built up front, single-threaded, so worker
    // scheduling can never influence which instances the checks see.
    struct Task {
        std::string name;
        std::function<CheckResult()> run;
    };
    std::vector<Task> tasks;

    tasks.push_back({"functional-calculus-split",
                     [&t, &h, ts] { return check_functional_calculus_split(t, h, ts); }});
    tasks.push_back({"multiplicative-form", [&t, ts] { return check_multiplicative_form(t, ts); }});

    std::optional<Decomposition> maybe_d;
    std::string decomp_error;
    try {
        maybe_d.emplace(decompose(t, OrderingTag::modulus_then_argument()));
    } catch (const std::exception& e) {
        decomp_error = e.what();
    }
    const bool have_decomp = maybe_d.has_value();

    // inverse perturbation: the decomposition's own N and Q, with Q shrunk
    // when needed so that ||Q|| < 0.5 / ||N^{-1}|| keeps T = N + Q invertible
    {
        const std::string name = "inverse-perturbation-identity";
        if (!have_decomp) {
            tasks.push_back({name, [name, decomp_error] {
                                 return failed_result(name, decomp_error);
                             }});
        } else {
            bool feasible = true;
            std::string reason;
            Matrix nm = maybe_d->n_part;
            Matrix qq = maybe_d->q_part;
            std::string note;
            try {
                const double ninv_op = operator_norm(inverse(nm));
                const double q_op = operator_norm(qq);
                if (q_op > 0.45 / ninv_op) {
                    const double s = 0.45 / (ninv_op * q_op);
                    qq *= Complex(s, 0.0);
                    note = "Q rescaled by " + format_scalar(s) + " for the norm bound";
                }
            } catch (const SingularMatrix&) {
                feasible = false;
                reason = "normal part is singular; identity needs invertible N";
            }
            if (feasible)
                tasks.push_back({name, [name, nm, qq, ts, note] {
                                     CheckResult r = check_inverse_perturbation(nm, qq, ts);
                                     if (!note.empty()) r.details = note;
                                     return r;
                                 }});
            else
                tasks.push_back({name, [name, reason] { return skipped_result(name, reason); }});
        }
    }

    // commuting nilpotent product: Q in flag coordinates (exactly strictly
    // upper), normalized, against a random polynomial in it
    {
        const std::string name = "commuting-nilpotent-product";
        if (!have_decomp) {
            tasks.push_back({name, [name, decomp_error] {
                                 return failed_result(name, decomp_error);
                             }});
        } else {
            Rng rng = root.derive(name);
            const Matrix qc_full = maybe_d->flag.basis.adjoint() * maybe_d->q_part * maybe_d->flag.basis;
            Matrix qn(n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) qn(i, j) = qc_full(i, j);
            const double qnorm = qn.frobenius_norm();
            if (qnorm > 1e-14) qn *= Complex(0.2 / qnorm, 0.0);
            Matrix a = Matrix::identity(n) * rng.annulus(0.0, 1.0);
            Matrix power = Matrix::identity(n);
            for (int k = 1; k <= 3; ++k) {
                power = power * qn;
                a += power * rng.annulus(0.0, 1.0);
            }
            tasks.push_back({name, [a, qn, ts] {
                                 return check_commuting_nilpotent_product(a, qn, ts);
                             }});
        }
    }

    // commuting pair: a fresh constructed pair of matching size (the
    // decomposition's N and Q do not commute in general)
    {
        const std::string name = "commuting-pair-calculus";
        Rng rng = root.derive(name);
        Matrix nm(n), qq(n);
        std::tie(nm, qq) = gen_commuting_pair(n, rng);
        tasks.push_back(
            {name, [nm, qq, &h, ts] { return check_commuting_pair_calculus(nm, qq, h, ts); }});
    }

    // corner calculus: a random proper cut of the decomposition flag
    {
        const std::string name = "corner-calculus";
        if (!have_decomp) {
            tasks.push_back({name, [name, decomp_error] {
                                 return failed_result(name, decomp_error);
                             }});
        } else if (n < 2) {
            tasks.push_back({name, [name] {
                                 return skipped_result(name,
                                                       "needs dimension at least 2 for a proper "
                                                       "projection");
                             }});
        } else {
            Rng rng = root.derive(name);
            const int k = rng.uniform_int(1, n - 1);
            const Projection p = Projection::onto_first_columns(maybe_d->flag.basis, k);
            tasks.push_back({name, [&t, p, &h, ts, k] {
                                 CheckResult r = check_corner_calculus(t, p, h, ts);
                                 r.details = "cut rank " + std::to_string(k);
                                 return r;
                             }});
        }
    }

    // coarse random flags on the Schur basis for the expectation checks
    const auto coarse_cuts = [n](Rng& rng) {
        const int blocks = rng.uniform_int(2, std::min(5, n));
        std::vector<int> interior(static_cast<std::size_t>(n - 1));
        std::iota(interior.begin(), interior.end(), 1);
        for (int i = 0; i < blocks - 1; ++i) {
            const int j = rng.uniform_int(i, n - 2);
            std::swap(interior[static_cast<std::size_t>(i)], interior[static_cast<std::size_t>(j)]);
        }
        std::vector<int> cuts(interior.begin(), interior.begin() + (blocks - 1));
        std::sort(cuts.begin(), cuts.end());
        cuts.insert(cuts.begin(), 0);
        cuts.push_back(n);
        return cuts;
    };

    {
        const std::string name = "block-expectation-calculus";
        if (!have_decomp) {
            tasks.push_back({name, [name, decomp_error] {
                                 return failed_result(name, decomp_error);
                             }});
        } else if (n < 2) {
            tasks.push_back({name, [name] {
                                 return skipped_result(name, "needs dimension at least 2 for a "
                                                             "nontrivial flag");
                             }});
        } else {
            Rng rng = root.derive(name);
            const Flag f = make_flag(maybe_d->flag.basis, coarse_cuts(rng));
            tasks.push_back({name, [&t, f, &h, ts] {
                                 return check_block_expectation_calculus(t, f, h, ts);
                             }});
        }
    }

    {
        const std::string name = "determinant-compression";
        if (!have_decomp) {
            tasks.push_back({name, [name, decomp_error] {
                                 return failed_result(name, decomp_error);
                             }});
        } else if (n < 2) {
            tasks.push_back({name, [name] {
                                 return skipped_result(name, "needs dimension at least 2 for a "
                                                             "nontrivial flag");
                             }});
        } else {
            Rng rng = root.derive(name);
            const Flag f = make_flag(maybe_d->flag.basis, coarse_cuts(rng));
            const std::uint64_t lseed = root.derive("determinant-lambdas").seed();
            const int trials = config.det_trials;
            tasks.push_back({name, [&t, f, trials, lseed, ts] {
                                 return check_determinant_compression(t, f, trials, lseed, ts);
                             }});
        }
    }

    // run; each slot is independent, results land by index
    std::vector<CheckResult> results(tasks.size());
    std::vector<double> seconds(tasks.size(), 0.0);
    const auto run_one = [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            results[i] = tasks[i].run();
        } catch (const NonConvergence& e) {
            results[i] = failed_result(tasks[i].name, e.what());
        } catch (const SingularResolvent& e) {
            results[i] = failed_result(tasks[i].name, e.what());
        } catch (const std::exception& e) {
            if (is_precondition_error(e))
                results[i] = skipped_result(tasks[i].name, e.what());
            else
                results[i] = failed_result(tasks[i].name, e.what());
        }
        const auto t1 = std::chrono::steady_clock::now();
        seconds[i] = std::chrono::duration<double>(t1 - t0).count();
    };

    const int workers = std::max(1, config.workers);
    if (workers == 1 || tasks.size() < 2) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(workers),
                                                        tasks.size());
        pool.reserve(count);
        for (std::size_t w = 0; w < count; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size();
                     i = next.fetch_add(1))
                    run_one(i);
            });
        for (std::thread& th : pool) th.join();
    }

    VerificationReport report;
    report.fingerprint = Fingerprint{n, t.frobenius_norm(), matrix_hash(t)};
    report.seed = config.seed;
    report.checks = std::move(results);
    report.all_passed = true;
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
        report.timings.emplace_back(report.checks[i].name, seconds[i]);
        if (!report.checks[i].skipped && !report.checks[i].passed) report.all_passed = false;
    }
    return report;
}

}  // namespace utf
