#pragma once

#include <string>

namespace bmn {

// Shortest decimal string that round-trips to the same double. Locale-free,
// '.' decimal separator; nan and inf render as "nan" / "inf" / "-inf".
std::string format_double(double value);

}  // namespace bmn
