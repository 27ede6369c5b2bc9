#include "genecop/copula.hpp"

#include <algorithm>
#include <cmath>

namespace genecop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logsumexp2(double p, double q) {
  const double m = std::max(p, q);
  if (m == -kInf) return -kInf;
  return m + std::log(std::exp(p - m) + std::exp(q - m));
}

void check_unit_closed(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError(std::string(name) + " must lie in [0,1]");
}

void check_unit_open(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0))
    throw DomainError(std::string(name) + " must lie in (0,1)");
}

void check_logs(double lu, double lv) {
  if (!(lu <= 0.0) || !(lv <= 0.0))
    throw DomainError("log copula arguments must be <= 0");
}

// log(e^a + e^b - 1) for a, b >= 0, accurate near a = b = 0 and immune to
// overflow for large exponents.
double log_clayton_sum(double a, double b) {
  const double m = std::max(a, b);
  if (m > 30.0) {
    if (std::isinf(m)) return kInf;
    return m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
  }
  return std::log1p(std::expm1(a) + std::expm1(b));
}

struct GumbelParts {
  double lx;  // log(-log u)
  double ly;  // log(-log v)
  double lB;  // log((-log u)^eta + (-log v)^eta)
  double A;   // B^(1/eta)
};

GumbelParts gumbel_parts(double eta, double lu, double lv) {
  GumbelParts p;
  p.lx = lu == 0.0 ? -kInf : std::log(-lu);
  p.ly = lv == 0.0 ? -kInf : std::log(-lv);
  p.lB = logsumexp2(eta * p.lx, eta * p.ly);
  p.A = std::exp(p.lB / eta);
  return p;
}

}  // namespace

CopulaFamily CopulaFamily::clayton(double eta) {
  if (!(std::isfinite(eta) && eta > 0.0))
    throw DomainError("Clayton eta must be finite and > 0");
  return CopulaFamily{CopulaKind::Clayton, eta};
}

CopulaFamily CopulaFamily::gumbel(double eta) {
  if (!(std::isfinite(eta) && eta > 1.0))
    throw DomainError("Gumbel eta must be finite and > 1");
  return CopulaFamily{CopulaKind::Gumbel, eta};
}

CopulaFamily CopulaFamily::independence() {
  return CopulaFamily{CopulaKind::Independence,
                      std::numeric_limits<double>::quiet_NaN()};
}

double log_cdf_from_logs(const CopulaFamily& fam, double lu, double lv) {
  check_logs(lu, lv);
  switch (fam.kind) {
    case CopulaKind::Independence:
      return lu + lv;
    case CopulaKind::Clayton: {
      if (lu == -kInf || lv == -kInf) return -kInf;
      const double logT = log_clayton_sum(-fam.eta * lu, -fam.eta * lv);
      return -logT / fam.eta;
    }
    case CopulaKind::Gumbel: {
      if (lu == -kInf || lv == -kInf) return -kInf;
      return -gumbel_parts(fam.eta, lu, lv).A;
    }
  }
  throw DomainError("unknown copula kind");
}

double log_partial_u_from_logs(const CopulaFamily& fam, double lu, double lv) {
  check_logs(lu, lv);
  switch (fam.kind) {
    case CopulaKind::Independence:
      return lv;
    case CopulaKind::Clayton: {
      if (lu == -kInf || lv == -kInf) return -kInf;
      const double eta = fam.eta;
      const double logT = log_clayton_sum(-eta * lu, -eta * lv);
      return -(eta + 1.0) * lu - (1.0 / eta + 1.0) * logT;
    }
    case CopulaKind::Gumbel: {
      if (lu == -kInf || lv == -kInf) return -kInf;
      const double eta = fam.eta;
      const GumbelParts p = gumbel_parts(eta, lu, lv);
      if (p.lB == -kInf) return 0.0;  // u = v = 1 limit of dC/du along v = 1
      return -p.A + (1.0 / eta - 1.0) * p.lB + (eta - 1.0) * p.lx - lu;
    }
  }
  throw DomainError("unknown copula kind");
}

double log_partial_v_from_logs(const CopulaFamily& fam, double lu, double lv) {
  // Both families are exchangeable: swap the roles of the coordinates.
  if (fam.kind == CopulaKind::Independence) {
    check_logs(lu, lv);
    return lu;
  }
  return log_partial_u_from_logs(fam, lv, lu);
}

double log_density_from_logs(const CopulaFamily& fam, double lu, double lv) {
  check_logs(lu, lv);
  switch (fam.kind) {
    case CopulaKind::Independence:
      return 0.0;
    case CopulaKind::Clayton: {
      if (lu == -kInf || lv == -kInf) return -kInf;
      const double eta = fam.eta;
      const double logT = log_clayton_sum(-eta * lu, -eta * lv);
      return std::log1p(eta) - (eta + 1.0) * (lu + lv) -
             (1.0 / eta + 2.0) * logT;
    }
    case CopulaKind::Gumbel: {
      if (lu == -kInf || lv == -kInf) return -kInf;
      const double eta = fam.eta;
      const GumbelParts p = gumbel_parts(eta, lu, lv);
      if (p.lB == -kInf) return kInf;  // density diverges at the (1,1) corner
      return -p.A + (2.0 / eta - 2.0) * p.lB + (eta - 1.0) * (p.lx + p.ly) -
             lu - lv + std::log1p((eta - 1.0) * std::exp(-p.lB / eta));
    }
  }
  throw DomainError("unknown copula kind");
}

double cdf(const CopulaFamily& fam, double u, double v) {
  check_unit_closed(u, "u");
  check_unit_closed(v, "v");
  return std::exp(log_cdf_from_logs(fam, std::log(u), std::log(v)));
}

double partial_u(const CopulaFamily& fam, double u, double v) {
  check_unit_open(u, "u");
  check_unit_closed(v, "v");
  return std::exp(log_partial_u_from_logs(fam, std::log(u), std::log(v)));
}

double partial_v(const CopulaFamily& fam, double u, double v) {
  check_unit_closed(u, "u");
  check_unit_open(v, "v");
  return std::exp(log_partial_v_from_logs(fam, std::log(u), std::log(v)));
}

double log_density(const CopulaFamily& fam, double u, double v) {
  check_unit_open(u, "u");
  check_unit_open(v, "v");
  return log_density_from_logs(fam, std::log(u), std::log(v));
}

double density(const CopulaFamily& fam, double u, double v) {
  return std::exp(log_density(fam, u, v));
}

double tau_to_eta(CopulaKind kind, double tau) {
  switch (kind) {
    case CopulaKind::Clayton:
      if (!(tau > 0.0 && tau < 1.0))
        throw DomainError("Clayton requires tau in (0,1)");
      return 2.0 * tau / (1.0 - tau);
    case CopulaKind::Gumbel:
      if (!(tau > 0.0 && tau < 1.0))
        throw DomainError("Gumbel requires tau in (0,1)");
      return 1.0 / (1.0 - tau);
    case CopulaKind::Independence:
      if (tau != 0.0)
        throw DomainError("Independence models tau = 0 only");
      return std::numeric_limits<double>::quiet_NaN();
  }
  throw DomainError("unknown copula kind");
}

double eta_to_tau(CopulaKind kind, double eta) {
  switch (kind) {
    case CopulaKind::Clayton:
      if (!(std::isfinite(eta) && eta > 0.0))
        throw DomainError("Clayton eta must be > 0");
      return eta / (eta + 2.0);
    case CopulaKind::Gumbel:
      if (!(std::isfinite(eta) && eta >= 1.0))
        throw DomainError("Gumbel eta must be >= 1");
      return 1.0 - 1.0 / eta;
    case CopulaKind::Independence:
      return 0.0;
  }
  throw DomainError("unknown copula kind");
}

double h_inverse(const CopulaFamily& fam, double w, double v) {
  check_unit_open(w, "w");
  check_unit_open(v, "v");
  switch (fam.kind) {
    case CopulaKind::Independence:
      return w;
    case CopulaKind::Clayton: {
      // Closed-form inversion of dC/dv = w, carried out in logs so that
      // strong dependence (large eta) cannot overflow v^(-eta).
      const double eta = fam.eta;
      const double lw = std::log(w), lv = std::log(v);
      const double a = -eta / (eta + 1.0) * lw - eta * lv;  // >= 0
      const double d = eta / (eta + 1.0) * lw;              // <= 0
      const double log_s = a + std::log(-std::expm1(d) + std::exp(-a));
      return std::exp(-log_s / eta);
    }
    case CopulaKind::Gumbel: {
      const double lv = std::log(v);
      double lo = 0.0, hi = 1.0;
      double u = w;
      for (int iter = 0; iter < 200; ++iter) {
        const double lu = std::log(u);
        const double h = std::exp(log_partial_v_from_logs(fam, lu, lv));
        if (std::abs(h - w) <= 1e-10) return u;
        if (h > w)
          hi = u;
        else
          lo = u;
        const double dens =
            std::exp(log_density_from_logs(fam, lu, lv));
        double next = u - (h - w) / dens;
        if (!(next > lo && next < hi) || !std::isfinite(next))
          next = 0.5 * (lo + hi);
        u = next;
      }
      throw ConvergenceError("h_inverse: Gumbel inversion did not converge");
    }
  }
  throw DomainError("unknown copula kind");
}

}  // namespace genecop
