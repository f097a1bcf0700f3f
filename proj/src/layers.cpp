#include "layers.h"

#include <algorithm>
#include <cmath>

namespace pbtzero {

void conv3x3(const double* in, double* out, const double* w, const double* bias, int n, int c_in,
             int c_out) {
    const int n2 = n * n;
    for (int co = 0; co < c_out; ++co) {
        double* o = out + co * n2;
        std::fill(o, o + n2, bias[co]);
        for (int ci = 0; ci < c_in; ++ci) {
            const double* im = in + ci * n2;
            const double* wk = w + (co * c_in + ci) * 9;
            for (int ky = -1; ky <= 1; ++ky) {
                for (int kx = -1; kx <= 1; ++kx) {
                    const double wv = wk[(ky + 1) * 3 + (kx + 1)];
                    const int y0 = std::max(0, -ky), y1 = std::min(n, n - ky);
                    const int x0 = std::max(0, -kx), x1 = std::min(n, n - kx);
                    for (int y = y0; y < y1; ++y) {
                        const double* src = im + (y + ky) * n + kx;
                        double* dst = o + y * n;
                        for (int x = x0; x < x1; ++x) dst[x] += wv * src[x];
                    }
                }
            }
        }
    }
}

void conv3x3_backward(const double* in, const double* d_out, double* d_in, const double* w,
                      double* d_w, double* d_b, int n, int c_in, int c_out) {
    const int n2 = n * n;
    for (int co = 0; co < c_out; ++co) {
        const double* go = d_out + co * n2;
        double acc = 0.0;
        for (int i = 0; i < n2; ++i) acc += go[i];
        d_b[co] += acc;
        for (int ci = 0; ci < c_in; ++ci) {
            const double* im = in + ci * n2;
            double* gi = d_in ? d_in + ci * n2 : nullptr;
            const double* wk = w + (co * c_in + ci) * 9;
            double* gwk = d_w + (co * c_in + ci) * 9;
            for (int ky = -1; ky <= 1; ++ky) {
                for (int kx = -1; kx <= 1; ++kx) {
                    const int y0 = std::max(0, -ky), y1 = std::min(n, n - ky);
                    const int x0 = std::max(0, -kx), x1 = std::min(n, n - kx);
                    const double wv = wk[(ky + 1) * 3 + (kx + 1)];
                    double gw = 0.0;
                    for (int y = y0; y < y1; ++y) {
                        const double* src = im + (y + ky) * n + kx;
                        const double* g = go + y * n;
                        for (int x = x0; x < x1; ++x) gw += g[x] * src[x];
                    }
                    gwk[(ky + 1) * 3 + (kx + 1)] += gw;
                    if (gi) {
                        for (int y = y0; y < y1; ++y) {
                            double* dst = gi + (y + ky) * n + kx;
                            const double* g = go + y * n;
                            for (int x = x0; x < x1; ++x) dst[x] += wv * g[x];
                        }
                    }
                }
            }
        }
    }
}

void conv1x1(const double* in, double* out, const double* w, const double* bias, int n2, int c_in,
             int c_out) {
    for (int co = 0; co < c_out; ++co) {
        double* o = out + co * n2;
        std::fill(o, o + n2, bias[co]);
        for (int ci = 0; ci < c_in; ++ci) {
            const double wv = w[co * c_in + ci];
            const double* im = in + ci * n2;
            for (int i = 0; i < n2; ++i) o[i] += wv * im[i];
        }
    }
}

void conv1x1_backward(const double* in, const double* d_out, double* d_in, const double* w,
                      double* d_w, double* d_b, int n2, int c_in, int c_out) {
    for (int co = 0; co < c_out; ++co) {
        const double* go = d_out + co * n2;
        double acc = 0.0;
        for (int i = 0; i < n2; ++i) acc += go[i];
        d_b[co] += acc;
        for (int ci = 0; ci < c_in; ++ci) {
            const double* im = in + ci * n2;
            double* gi = d_in ? d_in + ci * n2 : nullptr;
            double gw = 0.0;
            const double wv = w[co * c_in + ci];
            for (int i = 0; i < n2; ++i) {
                gw += go[i] * im[i];
                if (gi) gi[i] += wv * go[i];
            }
            d_w[co * c_in + ci] += gw;
        }
    }
}

void fully_connected(const double* in, double* out, const double* w, const double* bias,
                     size_t n_in, size_t n_out) {
    for (size_t o = 0; o < n_out; ++o) {
        double acc = bias[o];
        const double* wr = w + o * n_in;
        for (size_t i = 0; i < n_in; ++i) acc += wr[i] * in[i];
        out[o] = acc;
    }
}

void fully_connected_backward(const double* in, const double* d_out, double* d_in, const double* w,
                              double* d_w, double* d_b, size_t n_in, size_t n_out) {
    if (d_in) std::fill(d_in, d_in + n_in, 0.0);
    for (size_t o = 0; o < n_out; ++o) {
        const double g = d_out[o];
        d_b[o] += g;
        const double* wr = w + o * n_in;
        double* gwr = d_w + o * n_in;
        for (size_t i = 0; i < n_in; ++i) {
            gwr[i] += g * in[i];
            if (d_in) d_in[i] += wr[i] * g;
        }
    }
}

void relu_inplace(double* x, size_t count) {
    for (size_t i = 0; i < count; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward_inplace(double* grad, const double* out, size_t count) {
    for (size_t i = 0; i < count; ++i) {
        if (out[i] <= 0.0) grad[i] = 0.0;
    }
}

void softmax(const double* logits, double* p, size_t count) {
    double m = logits[0];
    for (size_t i = 1; i < count; ++i) m = std::max(m, logits[i]);
    double sum = 0.0;
    for (size_t i = 0; i < count; ++i) {
        p[i] = std::exp(logits[i] - m);
        sum += p[i];
    }
    for (size_t i = 0; i < count; ++i) p[i] /= sum;
}

}  // namespace pbtzero
