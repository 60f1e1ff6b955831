#pragma once

// Hot loops come in two flavours: a plain serial reference and an OpenMP
// version. Both must return identical results; tests and the benchmark
// compare them.
namespace sentikit {

enum class Exec { serial, parallel };

// Caps the OpenMP worker count; n <= 0 leaves the runtime default.
void set_max_threads(int n);
int max_threads();

}  // namespace sentikit
