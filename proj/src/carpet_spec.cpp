#include "cml/carpet_spec.hpp"

namespace cml {

CarpetSpec validate_spec(const CarpetSpec& spec) {
    switch (spec.family) {
        case Family::Fnp:
            if (spec.n < 5)
                throw ConstraintViolation("F_{n,p} requires n >= 5, got n = " + std::to_string(spec.n));
            if (spec.p < 1)
                throw ConstraintViolation("F_{n,p} requires p >= 1, got p = " + std::to_string(spec.p));
            // p < n/2 - 1, compared as 2p < n - 2 to stay in integers
            if (!(2 * spec.p < spec.n - 2))
                throw ConstraintViolation("F_{n,p} requires p < n/2 - 1, got p = " + std::to_string(spec.p) +
                                          ", n = " + std::to_string(spec.n));
            if (spec.r != 1)
                throw ConstraintViolation("F_{n,p} has r = 1 by definition");
            break;
        case Family::Fnpr:
            if (spec.n < 5)
                throw ConstraintViolation("F_{n,p,r} requires n >= 5, got n = " + std::to_string(spec.n));
            if (spec.p < 1)
                throw ConstraintViolation("F_{n,p,r} requires p >= 1, got p = " + std::to_string(spec.p));
            if (spec.r < 1)
                throw ConstraintViolation("F_{n,p,r} requires r >= 1, got r = " + std::to_string(spec.r));
            // p + r < n/2, compared as 2(p+r) < n
            if (!(2 * (spec.p + spec.r) < spec.n))
                throw ConstraintViolation("F_{n,p,r} requires p + r < n/2, got p + r = " +
                                          std::to_string(spec.p + spec.r) + ", n = " + std::to_string(spec.n));
            break;
        case Family::Sm:
            if (spec.m < 3)
                throw ConstraintViolation("S_m requires m >= 3, got m = " + std::to_string(spec.m));
            if (spec.m % 2 == 0)
                throw ConstraintViolation("S_m requires m odd, got m = " + std::to_string(spec.m));
            break;
    }
    return spec;
}

} // namespace cml
