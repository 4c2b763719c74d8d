#include "fraclog/errors.hpp"

namespace fraclog {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::configuration: return "configuration error";
        case ErrorKind::domain: return "domain error";
        case ErrorKind::admissibility: return "admissibility error";
        case ErrorKind::numerical: return "numerical error";
        case ErrorKind::monotonicity_violation: return "monotonicity violation";
        case ErrorKind::comparison_violation: return "comparison violation";
        case ErrorKind::barrier_violation: return "barrier violation";
        case ErrorKind::insufficient_data: return "insufficient data";
        case ErrorKind::precondition: return "precondition error";
        case ErrorKind::io: return "I/O error";
    }
    return "error";
}

}  // namespace fraclog
