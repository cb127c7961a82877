#ifndef HEUN_FROBENIUS_HPP
#define HEUN_FROBENIUS_HPP

#include <utility>
#include <vector>

#include "heun/heun_core.hpp"
#include "heun/polynomial.hpp"
#include "heun/types.hpp"

namespace heun {

// Indicial exponents of A v'' + B v' + C v = 0 at `center`:
// roots of mu(mu-1) A'(c) + mu B(c) at a simple root c of A, {0, 1} at an
// ordinary point. A multiple root of A is rejected.
std::pair<Complex, Complex> indicial_exponents(const PolyOde& ode, Complex center);

// Banded coefficient recurrence for v = (z-c)^mu sum a_n (z-c)^n.
// The relation for a_n reads sum_{j=0..bandwidth-1} coeff(n, j) a_{n-j} = 0;
// coeff(n, 0) vanishes exactly at the indicial roots (n + mu an indicial root).
class LocalRecurrence {
  public:
    LocalRecurrence(Polynomial a_shifted, Polynomial b_shifted, Polynomial c_shifted,
                    Complex center, Complex mu, bool singular_center);

    Complex center() const { return center_; }
    Complex mu() const { return mu_; }
    int bandwidth() const { return bandwidth_; }
    bool singular_center() const { return singular_; }
    Complex coeff(int n, int j) const;

  private:
    Polynomial as_, bs_, cs_;
    Complex center_, mu_;
    bool singular_;
    int bandwidth_;
};

// Builds the recurrence at `center` for exponent `mu`; mu must be an indicial
// exponent there (0/1 at ordinary points).
LocalRecurrence local_recurrence(const PolyOde& ode, Complex center, Complex mu);

struct LocalSeries {
    Complex center, mu;
    std::vector<Complex> coeffs;  // a_0 = 1
};

struct RunOptions {
    // |leading| below lead_tol * max|offsets| counts as a resonance; the
    // remainder must then be below consistency_tol * running scale and the
    // free coefficient is set to 0.
    double lead_tol = 1e-12;
    double consistency_tol = 1e-10;
};

// Forward recurrence with a_0 = 1; offsets whose coefficients vanish
// identically (degenerate parameter sets) are skipped by reindexing.
LocalSeries run_recurrence(const LocalRecurrence& rec, int n_max, const RunOptions& opt = {});

// Largest |obstruction| / scale encountered at resonance indices in the last
// run_recurrence call semantics; exposed for the apparent-singularity checks.
struct RunReport {
    LocalSeries series;
    double max_resonance_obstruction = 0.0;
    std::vector<int> resonance_indices;
};
RunReport run_recurrence_reported(const LocalRecurrence& rec, int n_max, const RunOptions& opt = {});

}  // namespace heun

#endif
