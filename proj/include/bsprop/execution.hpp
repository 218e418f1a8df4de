#pragma once

namespace bsprop {

// kSerial is the reference path; kParallel uses OpenMP and must produce
// bit-identical results.
enum class Execution { kSerial, kParallel };

}  // namespace bsprop
