#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "eegdec/tensor.hpp"

namespace eegdec {

// Amplitude/phase half-spectrum of a real multichannel signal. One row per
// channel, floor(n_time/2)+1 bins. Forward transform is unnormalized, the
// inverse is scaled by 1/n, so inverse(forward(x)) == x.
struct Spectrum {
    Matrix amplitudes;  // [n_channels x n_bins], >= 0
    Matrix phases;      // radians
    double bin_hz = 0.0;
    std::size_t n_time = 0;

    std::size_t n_channels() const { return amplitudes.rows; }
    std::size_t n_bins() const { return amplitudes.cols; }
};

struct ShrunkCovariance {
    Matrix matrix;              // gamma*mu*I + (1-gamma)*S
    double gamma = 0.0;         // shrinkage coefficient in [0,1]
    double target_scale = 0.0;  // mu = trace(S)/d
};

struct GeneralizedEig {
    std::vector<double> eigenvalues;  // descending
    Matrix vectors;                   // columns are eigenvectors, W^T B W = I
};

// In-place complex FFT; n arbitrary (radix-2 iterative, Bluestein otherwise).
// inverse applies the 1/n scale.
void fft(std::vector<std::complex<double>>& x, bool inverse);

Spectrum forward_spectrum(const Matrix& channels_by_time, double sample_rate);
Matrix inverse_spectrum(const Spectrum& spectrum);

// Single-signal convenience pair around the same transform.
Spectrum fourier_forward(const std::vector<double>& signal, double sample_rate = 1.0);
std::vector<double> fourier_inverse(const Spectrum& spectrum);

// Zero-phase (forward-backward) 4th-order Butterworth band-pass.
std::vector<double> bandpass(const std::vector<double>& signal, double sample_rate,
                             double lo_hz, double hi_hz);

// C = (1/(n-1)) * sum (x - mean)(x - mean)^T over the rows of X [n x d].
Matrix sample_covariance(const Matrix& X);

// Ledoit-Wolf optimal shrinkage toward mu*I, gamma clamped to [0,1].
ShrunkCovariance ledoit_wolf(const Matrix& X);

// (1-gamma)*S + gamma*mu*I with mu = trace(S)/d; used by tests to pin the
// gamma=0 / gamma=1 endpoints.
Matrix shrink_with_gamma(const Matrix& S, double gamma);

// Solves A w = lambda B w for symmetric A and positive-definite B via
// Cholesky reduction and Jacobi rotations. Eigenvalues sorted descending.
GeneralizedEig generalized_eig_sym(const Matrix& A, const Matrix& B);

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
Matrix cholesky(const Matrix& A);
// Solves A x = b given the Cholesky factor L of A.
std::vector<double> cholesky_solve(const Matrix& L, const std::vector<double>& b);

// Product-moment correlation; throws on constant input.
double pearson_r(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace eegdec
