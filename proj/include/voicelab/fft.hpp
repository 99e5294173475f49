#pragma once

#include <complex>
#include <vector>

// Thin wrapper around FFTW double-precision complex transforms.
// Plans are cached per (size, direction) with FFTW_ESTIMATE, which keeps
// the output deterministic for a given input.
namespace voicelab::fft {

/// In-place forward DFT: X[k] = sum_j x[j] e^{-2*pi*i*j*k/N}. Unnormalized.
void forward(std::vector<std::complex<double>>& data);

/// In-place inverse DFT including the 1/N factor, so inverse(forward(x)) == x.
void inverse(std::vector<std::complex<double>>& data);

/// In-place 2-D transforms on row-major n0 x n1 data, same conventions.
void forward2d(std::vector<std::complex<double>>& data, std::size_t n0, std::size_t n1);
void inverse2d(std::vector<std::complex<double>>& data, std::size_t n0, std::size_t n1);

}  // namespace voicelab::fft
