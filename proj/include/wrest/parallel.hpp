#pragma once

namespace wrest {

// Selects between the serial reference implementation of a kernel and the
// OpenMP one. Both produce identical results; tests compare them.
enum class Exec { serial, parallel };

} // namespace wrest
