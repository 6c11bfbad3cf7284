#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "leglab/report.hpp"
#include "leglab/symplectic.hpp"
#include "leglab/variety.hpp"

namespace leglab {

// Isotropy and rank test shared by every Legendrian check. Frames are sample
// order; results are aggregated in that order.
void check_frames(Report& rep, const std::vector<TangentFrame>& frames, const QMatrix& omega, std::size_t expected_rank);
void check_frames(Report& rep, const std::vector<ApproxFrame>& frames, const QMatrix& omega, std::size_t expected_rank,
                  const ApproxField& f);

struct BackendConfig {
  Backend backend = Backend::exact;
  long precision = 128;
  ApproxField field() const { return ApproxField(precision); }
};

Report check_legendrian(const ParamVariety& x, const SymplecticForm& form, std::size_t nsamples, std::uint64_t seed,
                        const BackendConfig& cfg = {});

using ParamPair = std::pair<std::vector<Rational>, std::vector<Rational>>;

// Parameter pairs with omega(p(t1), p(t2)) != 0. The first candidates are the
// all-zero and all-one assignments, then seeded draws.
std::optional<ParamPair> witness_nonisotropic_pair(const ParamVariety& x, const SymplecticForm& form,
                                                   std::size_t budget, std::uint64_t seed);

struct ReductionStage {
  QuotientChart chart;  // in the coordinates of the previous stage
};

enum class SectionStrategy { fiber_linear, univariate, newton };
std::string to_string(SectionStrategy s);

// X cut by k hyperplanes and projected, one stage at a time. Holds only the
// linear data; points are produced by the section samplers.
class ReducedVariety {
 public:
  std::shared_ptr<const ParamVariety> source;
  SymplecticForm form = SymplecticForm::standard(1);
  std::vector<ReductionStage> stages;
  QMatrix constraints;  // k x d: stage covectors pulled back to source coordinates
  QMatrix projection;   // (d - 2k) x d
  std::size_t source_rank = 0;  // generic cone rank of X
  SectionStrategy strategy = SectionStrategy::newton;
  std::vector<std::size_t> fiber_subset;  // for the fiber_linear strategy

  std::size_t depth() const { return stages.size(); }
  std::size_t ambient() const { return projection.rows(); }
  const QMatrix& omega_prime() const { return stages.back().chart.omega_prime; }
  std::size_t expected_rank() const { return source_rank - depth(); }
  int dimension() const { return static_cast<int>(expected_rank()) - 1; }
};

// Throws PreconditionError for a = 0 or when h lies in the cone tangent
// space at every probe sample ("vertex hyperplane").
ReducedVariety hyperplane_reduce(std::shared_ptr<const ParamVariety> x, const SymplecticForm& form, const QVector& a,
                                 std::uint64_t seed = 0,
                                 const std::optional<std::vector<QVector>>& section = std::nullopt);
// One more stage; `a` lives in the ambient of `r`.
ReducedVariety hyperplane_reduce(const ReducedVariety& r, const QVector& a, std::uint64_t seed = 0);

ReducedVariety coisotropic_reduce(std::shared_ptr<const ParamVariety> x, const SymplecticForm& form, std::size_t k,
                                  std::uint64_t seed);

template <class T>
struct SectionSample {
  std::vector<T> params;
  std::vector<T> point;       // on X and in every hyperplane, source coordinates
  std::vector<T> projected;   // reduced coordinates
  std::vector<std::vector<T>> frame;  // projected (T X-hat intersected with the constraints)
  std::vector<std::vector<T>> source_frame;  // the intersected vectors before projection
};

// Exact sections need the fiber_linear or univariate strategy; a finite
// section (no free parameters) returns whatever rational points exist.
std::vector<SectionSample<Rational>> section_samples_exact(const ReducedVariety& r, std::size_t count,
                                                           std::uint64_t seed);
std::vector<SectionSample<BigFloat>> section_samples_approx(const ReducedVariety& r, std::size_t count,
                                                            std::uint64_t seed, const ApproxField& f);

// Projected frames must be isotropic for the final form and have rank
// dim X - k + 1. `form_override` replaces that form (negative controls).
Report verify_reduction(const ReducedVariety& r, std::size_t nsamples, std::uint64_t seed,
                        const BackendConfig& cfg = {}, const std::optional<QMatrix>& form_override = std::nullopt);

// Form with one off-diagonal pair changed, for negative controls.
QMatrix corrupt_form(const QMatrix& omega);

// Counts sampled pairs of section points whose secant line passes through the
// last stage's center h. Pairs among `extra_points` (exact, previous-stage
// coordinates) are tested first.
Report secant_avoidance_probe(const ReducedVariety& r, std::size_t npairs, std::uint64_t seed,
                              const std::vector<QVector>& extra_points = {});

}  // namespace leglab
