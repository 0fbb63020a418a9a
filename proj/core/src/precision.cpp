#include "superosc/precision.hpp"

namespace superosc {
namespace {

// Pin the baseline before any library entry point runs; everything else is
// scoped explicitly.
const bool baseline_set = [] {
    Real::default_precision(kBaseDigits);
    return true;
}();

}  // namespace
}  // namespace superosc
