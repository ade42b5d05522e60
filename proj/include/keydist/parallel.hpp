#pragma once

namespace kd::parallel {

/// Applies the KD_THREADS environment cap to the OpenMP runtime. Values that
/// do not parse as a positive integer are ignored.
void configure_from_env();

int max_threads();

/// splitmix64 finalizer; used to derive independent per-task seeds so that
/// parallel and serial runs draw identical streams.
unsigned long long mix_seed(unsigned long long seed, unsigned long long stream);

}  // namespace kd::parallel
