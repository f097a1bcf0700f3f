#pragma once

#include <cstddef>

namespace pbtzero {

// Layer primitives shared by the forward pass and the hand-written backward
// pass. All buffers are dense doubles; convolutions use stride 1 and zero
// padding, weights indexed [out_channel][in_channel][ky][kx].

void conv3x3(const double* in, double* out, const double* w, const double* bias, int n, int c_in,
             int c_out);

// Accumulates into d_in (if non-null), d_w and d_b.
void conv3x3_backward(const double* in, const double* d_out, double* d_in, const double* w,
                      double* d_w, double* d_b, int n, int c_in, int c_out);

void conv1x1(const double* in, double* out, const double* w, const double* bias, int n2, int c_in,
             int c_out);

void conv1x1_backward(const double* in, const double* d_out, double* d_in, const double* w,
                      double* d_w, double* d_b, int n2, int c_in, int c_out);

void fully_connected(const double* in, double* out, const double* w, const double* bias,
                     size_t n_in, size_t n_out);

// Overwrites d_in (if non-null); accumulates into d_w and d_b.
void fully_connected_backward(const double* in, const double* d_out, double* d_in, const double* w,
                              double* d_w, double* d_b, size_t n_in, size_t n_out);

void relu_inplace(double* x, size_t count);

// Masks grad by the post-activation values (out > 0).
void relu_backward_inplace(double* grad, const double* out, size_t count);

void softmax(const double* logits, double* p, size_t count);

}  // namespace pbtzero
