#include "eegdec/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eegdec {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const std::complex<double> wlen = std::polar(1.0, angle);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                // Refresh the twiddle periodically to stop error accumulating
                // over long butterflies.
                if ((j & 63u) == 0 && j != 0)
                    w = std::polar(1.0, angle * static_cast<double>(j));
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Chirp phase exp(sign*i*pi*k^2/n) with the k^2 reduced mod 2n to keep the
// argument small.
std::complex<double> chirp(std::size_t k, std::size_t n, double sign) {
    const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) %
                             (2 * static_cast<std::uint64_t>(n));
    return std::polar(1.0, sign * kPi * static_cast<double>(k2) / static_cast<double>(n));
}

void fft_bluestein(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    std::vector<std::complex<double>> a(m, {0.0, 0.0});
    std::vector<std::complex<double>> b(m, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        const std::complex<double> c = chirp(k, n, -1.0);
        a[k] = x[k] * c;
        b[k] = std::conj(c);
        if (k > 0) b[m - k] = b[k];
    }
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
    fft_pow2(a, true);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * scale * chirp(k, n, -1.0);
}

struct Biquad {
    double b0, b1, b2;  // numerator
    double a1, a2;      // denominator (a0 normalized to 1)
};

// One-directional pass, direct form II transposed, zero initial state.
void biquad_apply(const Biquad& q, std::vector<double>& x) {
    double s1 = 0.0, s2 = 0.0;
    for (double& v : x) {
        const double in = v;
        const double out = q.b0 * in + s1;
        s1 = q.b1 * in - q.a1 * out + s2;
        s2 = q.b2 * in - q.a2 * out;
        v = out;
    }
}

double biquad_gain_at(const Biquad& q, double omega) {
    const std::complex<double> z = std::polar(1.0, omega);
    const std::complex<double> z1 = 1.0 / z;
    const std::complex<double> z2 = z1 * z1;
    const std::complex<double> num = q.b0 + q.b1 * z1 + q.b2 * z2;
    const std::complex<double> den = 1.0 + q.a1 * z1 + q.a2 * z2;
    return std::abs(num / den);
}

// 4th-order Butterworth band-pass as two biquads: analog low-pass prototype,
// low-pass to band-pass transform, bilinear with prewarped edges. Each biquad
// keeps one (z-1)(z+1) zero pair and is gain-normalized at the geometric
// center frequency.
std::array<Biquad, 2> design_butter_bandpass(double fs, double lo, double hi) {
    const double w1 = 2.0 * fs * std::tan(kPi * lo / fs);
    const double w2 = 2.0 * fs * std::tan(kPi * hi / fs);
    const double bw = w2 - w1;
    const double w0sq = w1 * w2;

    // N=2 Butterworth prototype pole in the upper half-plane.
    const std::complex<double> proto(-std::sqrt(0.5), std::sqrt(0.5));

    // Each prototype pole spawns two band-pass poles; their conjugates come
    // from the conjugate prototype pole and complete the two biquads.
    const std::complex<double> pb = proto * bw;
    const std::complex<double> disc = std::sqrt(pb * pb - 4.0 * w0sq);
    const std::complex<double> s_poles[2] = {(pb + disc) * 0.5, (pb - disc) * 0.5};

    std::array<Biquad, 2> cascade{};
    const double wc_digital = 2.0 * std::atan(std::sqrt(w0sq) / (2.0 * fs));
    for (int i = 0; i < 2; ++i) {
        const std::complex<double> zp = (2.0 * fs + s_poles[i]) / (2.0 * fs - s_poles[i]);
        Biquad q{1.0, 0.0, -1.0, -2.0 * zp.real(), std::norm(zp)};
        const double g = biquad_gain_at(q, wc_digital);
        if (g <= 0.0) throw std::runtime_error("bandpass: degenerate filter design");
        q.b0 /= g;
        q.b1 /= g;
        q.b2 /= g;
        cascade[i] = q;
    }
    return cascade;
}

}  // namespace

void fft(std::vector<std::complex<double>>& x, bool inverse) {
    const std::size_t n = x.size();
    if (n == 0) return;
    if (n == 1) return;
    if (is_pow2(n)) {
        fft_pow2(x, inverse);
        if (inverse) {
            const double scale = 1.0 / static_cast<double>(n);
            for (auto& v : x) v *= scale;
        }
        return;
    }
    if (!inverse) {
        fft_bluestein(x);
        return;
    }
    for (auto& v : x) v = std::conj(v);
    fft_bluestein(x);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : x) v = std::conj(v) * scale;
}

Spectrum forward_spectrum(const Matrix& channels_by_time, double sample_rate) {
    const std::size_t n = channels_by_time.cols;
    require(n >= 2, "forward_spectrum: need at least 2 samples");
    const std::size_t bins = n / 2 + 1;
    Spectrum sp;
    sp.amplitudes = Matrix(channels_by_time.rows, bins);
    sp.phases = Matrix(channels_by_time.rows, bins);
    sp.bin_hz = sample_rate / static_cast<double>(n);
    sp.n_time = n;

    std::vector<std::complex<double>> buf(n);
    for (std::size_t ch = 0; ch < channels_by_time.rows; ++ch) {
        const double* row = channels_by_time.row_ptr(ch);
        for (std::size_t t = 0; t < n; ++t) buf[t] = {row[t], 0.0};
        fft(buf, false);
        for (std::size_t k = 0; k < bins; ++k) {
            sp.amplitudes(ch, k) = std::abs(buf[k]);
            sp.phases(ch, k) = std::arg(buf[k]);
        }
    }
    return sp;
}

Matrix inverse_spectrum(const Spectrum& spectrum) {
    const std::size_t n = spectrum.n_time;
    require(n >= 2, "inverse_spectrum: need at least 2 samples");
    require(spectrum.amplitudes.cols == n / 2 + 1,
            "inverse_spectrum: bin count does not match n_time");
    Matrix out(spectrum.n_channels(), n);
    std::vector<std::complex<double>> buf(n);
    for (std::size_t ch = 0; ch < spectrum.n_channels(); ++ch) {
        for (std::size_t k = 0; k < spectrum.n_bins(); ++k)
            buf[k] = std::polar(spectrum.amplitudes(ch, k), spectrum.phases(ch, k));
        for (std::size_t k = spectrum.n_bins(); k < n; ++k)
            buf[k] = std::conj(buf[n - k]);
        fft(buf, true);
        double* row = out.row_ptr(ch);
        for (std::size_t t = 0; t < n; ++t) row[t] = buf[t].real();
    }
    return out;
}

Spectrum fourier_forward(const std::vector<double>& signal, double sample_rate) {
    require(signal.size() >= 2, "fourier_forward: need at least 2 samples");
    Matrix m(1, signal.size());
    std::copy(signal.begin(), signal.end(), m.data.begin());
    return forward_spectrum(m, sample_rate);
}

std::vector<double> fourier_inverse(const Spectrum& spectrum) {
    require(spectrum.n_channels() == 1, "fourier_inverse: expected a single channel");
    Matrix m = inverse_spectrum(spectrum);
    return m.data;
}

std::vector<double> bandpass(const std::vector<double>& signal, double sample_rate,
                             double lo_hz, double hi_hz) {
    require(sample_rate > 0.0, "bandpass: sample rate must be positive");
    require(lo_hz > 0.0 && lo_hz < hi_hz && hi_hz < sample_rate / 2.0,
            "bandpass: need 0 < lo < hi < Nyquist");
    if (signal.empty()) return {};

    const auto cascade = design_butter_bandpass(sample_rate, lo_hz, hi_hz);

    // Odd reflection padding damps the start-up transient of both passes.
    const std::size_t n = signal.size();
    const std::size_t pad =
        std::min(n - 1, static_cast<std::size_t>(std::llround(3.0 * sample_rate / lo_hz)));
    std::vector<double> work;
    work.reserve(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i)
        work.push_back(2.0 * signal.front() - signal[pad - i]);
    work.insert(work.end(), signal.begin(), signal.end());
    for (std::size_t i = 0; i < pad; ++i)
        work.push_back(2.0 * signal.back() - signal[n - 2 - i]);

    for (const auto& q : cascade) biquad_apply(q, work);
    std::reverse(work.begin(), work.end());
    for (const auto& q : cascade) biquad_apply(q, work);
    std::reverse(work.begin(), work.end());

    return std::vector<double>(work.begin() + static_cast<std::ptrdiff_t>(pad),
                               work.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

Matrix sample_covariance(const Matrix& X) {
    const std::size_t n = X.rows;
    const std::size_t d = X.cols;
    require(n >= 2, "sample_covariance: need at least 2 rows");
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mean[j] += X(i, j);
    for (double& m : mean) m /= static_cast<double>(n);

    Matrix C(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = X.row_ptr(i);
        for (std::size_t a = 0; a < d; ++a) {
            const double xa = row[a] - mean[a];
            for (std::size_t b = a; b < d; ++b)
                C(a, b) += xa * (row[b] - mean[b]);
        }
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            C(a, b) /= denom;
            C(b, a) = C(a, b);
        }
    return C;
}

Matrix shrink_with_gamma(const Matrix& S, double gamma) {
    require(S.rows == S.cols, "shrink_with_gamma: matrix must be square");
    const std::size_t d = S.rows;
    double mu = 0.0;
    for (std::size_t i = 0; i < d; ++i) mu += S(i, i);
    mu /= static_cast<double>(d);
    Matrix out(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            out(a, b) = (1.0 - gamma) * S(a, b) + (a == b ? gamma * mu : 0.0);
    return out;
}

ShrunkCovariance ledoit_wolf(const Matrix& X) {
    const std::size_t n = X.rows;
    const std::size_t d = X.cols;
    require(n >= 2, "ledoit_wolf: need at least 2 rows");

    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mean[j] += X(i, j);
    for (double& m : mean) m /= static_cast<double>(n);

    Matrix S = sample_covariance(X);
    double mu = 0.0;
    for (std::size_t i = 0; i < d; ++i) mu += S(i, i);
    mu /= static_cast<double>(d);

    // dist2 = ||S - mu*I||_F^2
    double dist2 = 0.0;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            const double v = S(a, b) - (a == b ? mu : 0.0);
            dist2 += v * v;
        }

    double gamma;
    if (dist2 <= 0.0) {
        gamma = 1.0;  // S already a multiple of I (includes the S = 0 case)
    } else {
        // beta_bar = (1/n^2) * sum_t ||x_t x_t^T - S||_F^2 over centered rows
        double beta_sum = 0.0;
        std::vector<double> xc(d);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) xc[j] = X(i, j) - mean[j];
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) {
                    const double v = xc[a] * xc[b] - S(a, b);
                    beta_sum += v * v;
                }
        }
        const double beta_bar = beta_sum / (static_cast<double>(n) * static_cast<double>(n));
        gamma = std::min(beta_bar, dist2) / dist2;
        gamma = std::clamp(gamma, 0.0, 1.0);
    }

    ShrunkCovariance out;
    out.gamma = gamma;
    out.target_scale = mu;
    out.matrix = shrink_with_gamma(S, gamma);
    return out;
}

Matrix cholesky(const Matrix& A) {
    require(A.rows == A.cols, "cholesky: matrix must be square");
    const std::size_t d = A.rows;
    Matrix L(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = A(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= L(i, k) * L(j, k);
            if (i == j) {
                if (sum <= 0.0)
                    throw std::runtime_error(
                        "cholesky: matrix is not positive definite; add diagonal "
                        "loading (regularization) and retry");
                L(i, j) = std::sqrt(sum);
            } else {
                L(i, j) = sum / L(j, j);
            }
        }
    }
    return L;
}

std::vector<double> cholesky_solve(const Matrix& L, const std::vector<double>& b) {
    const std::size_t d = L.rows;
    require(b.size() == d, "cholesky_solve: dimension mismatch");
    std::vector<double> y(d);
    for (std::size_t i = 0; i < d; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= L(i, k) * y[k];
        y[i] = sum / L(i, i);
    }
    std::vector<double> x(d);
    for (std::size_t ii = d; ii-- > 0;) {
        double sum = y[ii];
        for (std::size_t k = ii + 1; k < d; ++k) sum -= L(k, ii) * x[k];
        x[ii] = sum / L(ii, ii);
    }
    return x;
}

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Tolerance on the
// off-diagonal Frobenius norm relative to the full norm.
void jacobi_eig(Matrix C, std::vector<double>& eigenvalues, Matrix& vectors) {
    const std::size_t d = C.rows;
    vectors = Matrix(d, d);
    for (std::size_t i = 0; i < d; ++i) vectors(i, i) = 1.0;

    constexpr int kMaxSweeps = 100;
    constexpr double kTol = 1e-12;

    double total = 0.0;
    for (double v : C.data) total += v * v;
    const double thresh = kTol * std::sqrt(std::max(total, 1e-300));

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) off += 2.0 * C(p, q) * C(p, q);
        if (std::sqrt(off) <= thresh) break;

        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = C(p, q);
                if (apq == 0.0) continue;
                const double app = C(p, p);
                const double aqq = C(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double ckp = C(k, p);
                    const double ckq = C(k, q);
                    C(k, p) = c * ckp - s * ckq;
                    C(k, q) = s * ckp + c * ckq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double cpk = C(p, k);
                    const double cqk = C(q, k);
                    C(p, k) = c * cpk - s * cqk;
                    C(q, k) = s * cpk + c * cqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = vectors(k, p);
                    const double vkq = vectors(k, q);
                    vectors(k, p) = c * vkp - s * vkq;
                    vectors(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    eigenvalues.resize(d);
    for (std::size_t i = 0; i < d; ++i) eigenvalues[i] = C(i, i);
}

}  // namespace

GeneralizedEig generalized_eig_sym(const Matrix& A, const Matrix& B) {
    require(A.rows == A.cols && B.rows == B.cols && A.rows == B.rows,
            "generalized_eig_sym: dimension mismatch");
    const std::size_t d = A.rows;
    const Matrix L = cholesky(B);

    // C = L^-1 A L^-T
    Matrix Y(d, d);  // Y = L^-1 A
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            double sum = A(i, j);
            for (std::size_t k = 0; k < i; ++k) sum -= L(i, k) * Y(k, j);
            Y(i, j) = sum / L(i, i);
        }
    }
    Matrix C(d, d);  // C = (L^-1 Y^T)^T
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            double sum = Y(j, i);
            for (std::size_t k = 0; k < i; ++k) sum -= L(i, k) * C(j, k);
            C(j, i) = sum / L(i, i);
        }
    }

    std::vector<double> lambda;
    Matrix V;
    jacobi_eig(C, lambda, V);

    // W = L^-T V, column by column
    Matrix W(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t ii = d; ii-- > 0;) {
            double sum = V(ii, j);
            for (std::size_t k = ii + 1; k < d; ++k) sum -= L(k, ii) * W(k, j);
            W(ii, j) = sum / L(ii, ii);
        }
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lambda[a] > lambda[b]; });

    GeneralizedEig out;
    out.eigenvalues.resize(d);
    out.vectors = Matrix(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t src = order[j];
        out.eigenvalues[j] = lambda[src];
        // Fix the sign so the largest-magnitude component is positive.
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            if (std::abs(W(i, src)) > best) {
                best = std::abs(W(i, src));
                arg = i;
            }
        }
        const double sign = (W(arg, src) < 0.0) ? -1.0 : 1.0;
        for (std::size_t i = 0; i < d; ++i) out.vectors(i, j) = sign * W(i, src);
    }
    return out;
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size(), "pearson_r: length mismatch");
    require(x.size() >= 3, "pearson_r: need at least 3 points");
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw std::invalid_argument("pearson_r: undefined correlation for constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace eegdec
