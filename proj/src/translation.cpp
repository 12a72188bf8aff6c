#include "qmanifold/translation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

namespace qmfd {

namespace {

// Ladder generator G = (adag - a)/sqrt(2) truncated to size m:
// G[k+1,k] = sqrt((k+1)/2), G[k,k+1] = -sqrt((k+1)/2). exp(x G) realizes
// translation by x; G is antisymmetric, so the exponential is orthogonal.
Eigen::MatrixXd ladder_generator(int m) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k + 1 < m; ++k) {
    const double v = std::sqrt(0.5 * (k + 1));
    g(k + 1, k) = v;
    g(k, k + 1) = -v;
  }
  return g;
}

// Scaling-and-squaring with the degree-13 Pade approximant.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  static const double theta13 = 5.371920351148152;
  static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                             1187353796428800.0,  129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,       1323241920.0,
                             40840800.0,          960960.0,            16380.0,
                             182.0,               1.0};
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  }
  const Eigen::MatrixXd as = a / std::pow(2.0, squarings);
  const auto n = a.rows();
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = as * as;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a2 * a4;
  const Eigen::MatrixXd u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
            b[3] * a2 + b[1] * ident);
  const Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                            b[4] * a4 + b[2] * a2 + b[0] * ident;
  Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

int heuristic_padding(int source_degree, double shift_norm) {
  return source_degree +
         static_cast<int>(std::ceil(6.0 * shift_norm * std::sqrt(source_degree + 1.0))) + 8;
}

// Largest singular value of the difference between the padded realization
// and a reference on a larger space, restricted to source-degree inputs.
double axis_defect(double shift, int source_degree, int padded_degree) {
  const int src = source_degree + 1;
  const int pad = padded_degree + 1;
  const int boost = std::max(16, (padded_degree - source_degree) / 2 + 8);
  const int ref = pad + boost;

  const Eigen::MatrixXd e = expm(shift * ladder_generator(pad)).leftCols(src);
  const Eigen::MatrixXd er = expm(shift * ladder_generator(ref)).leftCols(src);
  Eigen::MatrixXd diff = er;
  diff.topRows(pad) -= e;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(diff.transpose() * diff);
  if (solver.info() != Eigen::Success) throw Error("translation: defect eigensolver failed");
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

// data has `extent` entries per axis (dim axes, row-major); multiply the
// given axis by the row-major matrix op (extent x extent).
void mode_multiply(std::vector<Complex>& data, int dim, int extent, int axis,
                   const std::vector<double>& op) {
  std::size_t lead = 1, trail = 1;
  for (int a = 0; a < axis; ++a) lead *= static_cast<std::size_t>(extent);
  for (int a = axis + 1; a < dim; ++a) trail *= static_cast<std::size_t>(extent);
  const auto e = static_cast<std::size_t>(extent);

  std::vector<Complex> fiber(e);
  for (std::size_t l = 0; l < lead; ++l) {
    for (std::size_t t = 0; t < trail; ++t) {
      Complex* base = data.data() + l * e * trail + t;
      for (std::size_t k = 0; k < e; ++k) fiber[k] = base[k * trail];
      for (std::size_t r = 0; r < e; ++r) {
        const double* row = op.data() + r * e;
        Complex acc(0.0, 0.0);
        for (std::size_t k = 0; k < e; ++k) acc += row[k] * fiber[k];
        base[r * trail] = acc;
      }
    }
  }
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TranslationPlan TranslationPlan::make(int dim, int source_degree,
                                      std::span<const double> shift,
                                      const TranslationConfig& cfg) {
  if (static_cast<int>(shift.size()) != dim) {
    throw DimensionMismatch("TranslationPlan: shift dimension mismatch");
  }
  if (source_degree < 0) throw Error("TranslationPlan: negative source degree");

  TranslationPlan plan;
  plan.dim_ = dim;
  plan.source_degree_ = source_degree;
  plan.shift_.assign(shift.begin(), shift.end());

  int padded = source_degree;
  if (norm2(shift) > 0.0) {
    if (cfg.padded_override > 0) {
      if (cfg.padded_override < source_degree) {
        throw Error("TranslationPlan: padded override below source degree");
      }
      padded = cfg.padded_override;
    } else {
      const int cap = cfg.max_degree > 0 ? cfg.max_degree : 2 * source_degree + 8;
      padded = std::min(heuristic_padding(source_degree, norm2(shift)),
                        std::max(cap, source_degree));
    }
  }
  plan.padded_degree_ = padded;

  plan.axis_ops_.resize(static_cast<std::size_t>(dim));
  double growth = 1.0;
  for (int a = 0; a < dim; ++a) {
    const double xa = shift[static_cast<std::size_t>(a)];
    if (xa == 0.0) continue;  // identity on this axis
    growth *= 1.0 + axis_defect(xa, source_degree, padded);
    const Eigen::MatrixXd op = expm(xa * ladder_generator(padded + 1));
    auto& flat = plan.axis_ops_[static_cast<std::size_t>(a)];
    flat.resize(static_cast<std::size_t>(op.size()));
    for (int r = 0; r < op.rows(); ++r) {
      for (int c = 0; c < op.cols(); ++c) {
        flat[static_cast<std::size_t>(r) * static_cast<std::size_t>(op.cols()) +
             static_cast<std::size_t>(c)] = op(r, c);
      }
    }
  }
  plan.defect_ = growth - 1.0;

  if (plan.defect_ >= cfg.defect_tol) {
    throw PlanRejected("translation plan rejected: measured defect " + sci(plan.defect_) +
                           " at padded degree " + std::to_string(padded) +
                           " (shift too large for the configured degree budget)",
                       plan.defect_);
  }
  return plan;
}

SchwartzFn TranslationPlan::apply(const SchwartzFn& f) const {
  if (f.dim() != dim_) throw DimensionMismatch("TranslationPlan::apply: dimension mismatch");
  if (f.degree() > source_degree_) {
    throw PreconditionError("TranslationPlan::apply: function degree exceeds plan source");
  }
  SchwartzFn padded = f.padded_to(padded_degree_);
  std::vector<Complex> data = padded.coeffs();
  for (int a = 0; a < dim_; ++a) {
    const auto& op = axis_ops_[static_cast<std::size_t>(a)];
    if (op.empty()) continue;
    mode_multiply(data, dim_, padded_degree_ + 1, a, op);
  }
  return SchwartzFn(dim_, padded_degree_, std::move(data));
}

SchwartzFn translate(const SchwartzFn& f, std::span<const double> x,
                     const TranslationConfig& cfg) {
  if (norm2(x) == 0.0) return f;
  return TranslationPlan::make(f.dim(), f.degree(), x, cfg).apply(f);
}

double verify_translation_group(const SchwartzFn& f, std::span<const double> x,
                                std::span<const double> y, const TranslationConfig& cfg) {
  if (f.norm() == 0.0) return 0.0;
  std::vector<double> xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xy[i] = x[i] + y[i];
  const SchwartzFn chained = translate(translate(f, x, cfg), y, cfg);
  const SchwartzFn direct = translate(f, xy, cfg);
  return (chained - direct).norm() / f.norm();
}

double verify_translation_linearity(const SchwartzFn& f, const SchwartzFn& g, Complex lambda,
                                    std::span<const double> x, const TranslationConfig& cfg) {
  const int deg = std::max(f.degree(), g.degree());
  const TranslationPlan plan = TranslationPlan::make(f.dim(), deg, x, cfg);
  const SchwartzFn tf = plan.apply(f.padded_to(deg));
  const SchwartzFn tg = plan.apply(g.padded_to(deg));
  const double scale_res = (plan.apply(lambda * f.padded_to(deg)) - lambda * tf).norm();
  const double sum_res = (plan.apply(f.padded_to(deg) + g.padded_to(deg)) - (tf + tg)).norm();
  return std::max(scale_res, sum_res);
}

ModulusRecord translation_continuity_probe(const SchwartzFn& f, std::span<const double> x0,
                                           std::span<const double> radii,
                                           const TranslationConfig& cfg) {
  ModulusRecord record;
  record.radii.assign(radii.begin(), radii.end());
  const SchwartzFn base = translate(f, x0, cfg);
  const int n = f.dim();

  for (double r : radii) {
    double worst = 0.0;
    // Probe along +/- each coordinate direction at |x| = r.
    for (int a = 0; a < n; ++a) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> x(x0.begin(), x0.end());
        x[static_cast<std::size_t>(a)] += sign * r;
        const SchwartzFn moved = translate(f, x, cfg);
        worst = std::max(worst, nuclear_seminorm(moved - base, 1));
      }
    }
    record.moduli.push_back(worst);
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const auto m = static_cast<double>(record.radii.size());
  for (std::size_t i = 0; i < record.radii.size(); ++i) {
    const double lx = std::log(record.radii[i]);
    const double ly = std::log(std::max(record.moduli[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  record.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return record;
}

}  // namespace qmfd
