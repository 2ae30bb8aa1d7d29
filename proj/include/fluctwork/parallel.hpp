#pragma once

namespace fluctwork {

// Selects between the OpenMP kernel and its serial reference. Both paths
// produce bit-identical results; the serial path is kept for testing and
// benchmarking.
enum class Exec { serial, parallel };

}  // namespace fluctwork
