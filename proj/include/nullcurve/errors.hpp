#pragma once

#include <stdexcept>
#include <string>

namespace nullcurve {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define NULLCURVE_ERROR(Name)                                        \
    struct Name : Error {                                            \
        explicit Name(const std::string& msg = #Name) : Error(msg) {} \
    }

// domain
NULLCURVE_ERROR(DuplicatePuncture);
NULLCURVE_ERROR(NoAdmissibleRadius);
NULLCURVE_ERROR(SampleCountMismatch);
NULLCURVE_ERROR(ZeroOnContour);
NULLCURVE_ERROR(NonIntegralWinding);

// quadric
NULLCURVE_ERROR(NotOnQuadric);
NULLCURVE_ERROR(NearOrigin);
NULLCURVE_ERROR(OutsideRetractionDomain);
NULLCURVE_ERROR(NoConvergence);
NULLCURVE_ERROR(ZeroSpinor);
NULLCURVE_ERROR(SamplesTooCoarse);
NULLCURVE_ERROR(DimensionNot3);

// weierstrass
NULLCURVE_ERROR(PoleAtSample);
NULLCURVE_ERROR(NonzeroPeriods);
NULLCURVE_ERROR(NonzeroRealPeriods);
NULLCURVE_ERROR(FlatData);
NULLCURVE_ERROR(GNotHolomorphic);

// convexint
NULLCURVE_ERROR(BadMargin);
NULLCURVE_ERROR(Infeasible);
NULLCURVE_ERROR(BudgetExceeded);

// spray
NULLCURVE_ERROR(BallExceeded);
NULLCURVE_ERROR(FlatOnLoop);
NULLCURVE_ERROR(RankDeficient);
NULLCURVE_ERROR(ClassChanged);

// toolkit
NULLCURVE_ERROR(ParseError);
NULLCURVE_ERROR(NonFiniteVertex);
NULLCURVE_ERROR(GridTooSmall);

#undef NULLCURVE_ERROR

} // namespace nullcurve
