#include "gradient.h"

#include <algorithm>
#include <cmath>

#include "layers.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pbtzero {

namespace {

// Fixed block count for the deterministic reduction: per-block partial sums
// are combined in block order whatever the thread count, so results do not
// depend on how many workers ran.
constexpr int kGradBlocks = 16;

struct Accum {
    double value_sum = 0.0;
    double policy_sum = 0.0;
};

void check_example(const NetworkConfig& cfg, const TrainingExample& ex) {
    const size_t n2 = static_cast<size_t>(cfg.board_size) * cfg.board_size;
    if (ex.features.size() != kFeaturePlanes * n2 || ex.pi.size() != n2 + 1 ||
        ex.z.size() != static_cast<size_t>(cfg.value_outputs())) {
        throw TrainStepError("training example does not match network config");
    }
}

// Forward + backward for one example; accumulates the gradient of the
// un-averaged per-example loss (without the L2 term) into grad.
void accumulate_example(const NetworkConfig& cfg, const NetLayout& layout, const double* theta,
                        const TrainingExample& ex, const Hyperparams& hp, double* grad,
                        NetWorkspace& ws, std::vector<double>& input, Accum& acc) {
    const int n = cfg.board_size;
    const int n2 = n * n;
    const int f = cfg.filters;
    const int vout = cfg.value_outputs();
    const size_t map = static_cast<size_t>(f) * n2;

    input.resize(ex.features.size());
    for (size_t i = 0; i < ex.features.size(); ++i) input[i] = ex.features[i];
    ws.resize_for(cfg);
    run_forward(cfg, layout, theta, input.data(), ws);

    // policy term evaluated through the logits for stability
    double m = ws.logits[0];
    for (int a = 1; a <= n2; ++a) m = std::max(m, ws.logits[a]);
    double lse = 0.0;
    for (int a = 0; a <= n2; ++a) lse += std::exp(ws.logits[a] - m);
    lse = m + std::log(lse);
    double policy = 0.0;
    for (int a = 0; a <= n2; ++a) {
        if (ex.pi[a] != 0.0f) policy -= ex.pi[a] * (ws.logits[a] - lse);
    }
    double value = 0.0;
    for (int k = 0; k < vout; ++k) {
        const double d = static_cast<double>(ex.z[k]) - ws.v[k];
        value += d * d;
    }
    value /= vout;
    acc.value_sum += value;
    acc.policy_sum += policy;

    for (int a = 0; a <= n2; ++a) ws.d_logits[a] = ws.p[a] - ex.pi[a];
    for (int k = 0; k < vout; ++k) {
        const double dv = hp.value_loss_ratio * 2.0 * (ws.v[k] - ex.z[k]) / vout;
        ws.d_v[k] = dv * (1.0 - ws.v[k] * ws.v[k]);  // through tanh
    }

    const double* top = ws.trunk.data() + cfg.residual_blocks * map;
    std::fill(ws.d_a.begin(), ws.d_a.end(), 0.0);

    // value head
    fully_connected_backward(ws.vc.data(), ws.d_v.data(), ws.d_vc.data(), theta + layout.vfc_w,
                             grad + layout.vfc_w, grad + layout.vfc_b, n2, vout);
    relu_backward_inplace(ws.d_vc.data(), ws.vc.data(), n2);
    conv1x1_backward(top, ws.d_vc.data(), ws.d_a.data(), theta + layout.vconv_w,
                     grad + layout.vconv_w, grad + layout.vconv_b, n2, f, 1);

    // policy head
    fully_connected_backward(ws.pc.data(), ws.d_logits.data(), ws.d_pc.data(),
                             theta + layout.pfc_w, grad + layout.pfc_w, grad + layout.pfc_b,
                             2 * static_cast<size_t>(n2), n2 + 1);
    relu_backward_inplace(ws.d_pc.data(), ws.pc.data(), 2 * static_cast<size_t>(n2));
    conv1x1_backward(top, ws.d_pc.data(), ws.d_a.data(), theta + layout.pconv_w,
                     grad + layout.pconv_w, grad + layout.pconv_b, n2, f, 2);

    // residual blocks, last to first; ws.d_a holds dL/d trunk[b+1]
    for (int b = cfg.residual_blocks - 1; b >= 0; --b) {
        const auto& blk = layout.blocks[b];
        const double* out = ws.trunk.data() + (b + 1) * map;
        const double* mid = ws.t1.data() + b * map;
        const double* prev = ws.trunk.data() + b * map;
        relu_backward_inplace(ws.d_a.data(), out, map);
        std::fill(ws.d_t1.begin(), ws.d_t1.end(), 0.0);
        conv3x3_backward(mid, ws.d_a.data(), ws.d_t1.data(), theta + blk.w2, grad + blk.w2,
                         grad + blk.b2, n, f, f);
        relu_backward_inplace(ws.d_t1.data(), mid, map);
        std::fill(ws.d_b.begin(), ws.d_b.end(), 0.0);
        conv3x3_backward(prev, ws.d_t1.data(), ws.d_b.data(), theta + blk.w1, grad + blk.w1,
                         grad + blk.b1, n, f, f);
        // the skip connection passes the block-output gradient straight through
        for (size_t i = 0; i < map; ++i) ws.d_a[i] += ws.d_b[i];
    }

    relu_backward_inplace(ws.d_a.data(), ws.trunk.data(), map);
    conv3x3_backward(ws.input.data(), ws.d_a.data(), nullptr, theta + layout.stem_w,
                     grad + layout.stem_w, grad + layout.stem_b, n, kFeaturePlanes, f);
}

LossBreakdown finish(const NetworkConfig& cfg, const std::vector<double>& theta,
                     const Hyperparams& hp, std::vector<double>& grad, const Accum& acc,
                     size_t batch_size) {
    const double inv = 1.0 / static_cast<double>(batch_size);
    for (auto& g : grad) g *= inv;
    double sq = 0.0;
    for (size_t i = 0; i < theta.size(); ++i) {
        sq += theta[i] * theta[i];
        grad[i] += 2.0 * hp.l2_coefficient * theta[i];
    }
    LossBreakdown out;
    out.value_term = acc.value_sum * inv;
    out.policy_term = acc.policy_sum * inv;
    out.reg_term = hp.l2_coefficient * sq;
    out.total = hp.value_loss_ratio * out.value_term + out.policy_term + out.reg_term;
    return out;
}

}  // namespace

LossBreakdown batch_loss_and_gradient(const NetworkConfig& cfg, const NetLayout& layout,
                                      const std::vector<double>& theta,
                                      std::span<const TrainingExample* const> batch,
                                      const Hyperparams& hp, std::vector<double>& grad,
                                      int threads) {
    if (batch.empty()) throw TrainStepError("empty batch");
    for (const auto* ex : batch) check_example(cfg, *ex);

    const size_t count = batch.size();
    const int blocks = static_cast<int>(std::min<size_t>(kGradBlocks, count));
    std::vector<std::vector<double>> block_grad(blocks);
    std::vector<Accum> block_acc(blocks);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(std::max(1, threads))
#endif
    for (int b = 0; b < blocks; ++b) {
        const size_t begin = count * b / blocks;
        const size_t end = count * (b + 1) / blocks;
        block_grad[b].assign(layout.total, 0.0);
        NetWorkspace ws;
        std::vector<double> input;
        for (size_t i = begin; i < end; ++i) {
            accumulate_example(cfg, layout, theta.data(), *batch[i], hp, block_grad[b].data(), ws,
                               input, block_acc[b]);
        }
    }

    grad.assign(layout.total, 0.0);
    Accum acc;
    for (int b = 0; b < blocks; ++b) {
        const double* src = block_grad[b].data();
        for (size_t i = 0; i < layout.total; ++i) grad[i] += src[i];
        acc.value_sum += block_acc[b].value_sum;
        acc.policy_sum += block_acc[b].policy_sum;
    }
    return finish(cfg, theta, hp, grad, acc, count);
}

LossBreakdown reference_loss_and_gradient(const NetworkConfig& cfg, const NetLayout& layout,
                                          const std::vector<double>& theta,
                                          std::span<const TrainingExample* const> batch,
                                          const Hyperparams& hp, std::vector<double>& grad) {
    if (batch.empty()) throw TrainStepError("empty batch");
    for (const auto* ex : batch) check_example(cfg, *ex);
    grad.assign(layout.total, 0.0);
    Accum acc;
    NetWorkspace ws;
    std::vector<double> input;
    for (const auto* ex : batch) {
        accumulate_example(cfg, layout, theta.data(), *ex, hp, grad.data(), ws, input, acc);
    }
    return finish(cfg, theta, hp, grad, acc, batch.size());
}

LossBreakdown batch_loss(const NetworkConfig& cfg, const NetLayout& layout,
                         const std::vector<double>& theta,
                         std::span<const TrainingExample* const> batch, const Hyperparams& hp) {
    if (batch.empty()) throw TrainStepError("empty batch");
    NetWorkspace ws;
    std::vector<double> input;
    Accum acc;
    for (const auto* ex : batch) {
        check_example(cfg, *ex);
        input.assign(ex->features.begin(), ex->features.end());
        ws.resize_for(cfg);
        run_forward(cfg, layout, theta.data(), input.data(), ws);
        const int n2 = cfg.board_size * cfg.board_size;
        double m = ws.logits[0];
        for (int a = 1; a <= n2; ++a) m = std::max(m, ws.logits[a]);
        double lse = 0.0;
        for (int a = 0; a <= n2; ++a) lse += std::exp(ws.logits[a] - m);
        lse = m + std::log(lse);
        double policy = 0.0;
        for (int a = 0; a <= n2; ++a) {
            if (ex->pi[a] != 0.0f) policy -= ex->pi[a] * (ws.logits[a] - lse);
        }
        double value = 0.0;
        for (int k = 0; k < cfg.value_outputs(); ++k) {
            const double d = static_cast<double>(ex->z[k]) - ws.v[k];
            value += d * d;
        }
        acc.value_sum += value / cfg.value_outputs();
        acc.policy_sum += policy;
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    double sq = 0.0;
    for (double w : theta) sq += w * w;
    LossBreakdown out;
    out.value_term = acc.value_sum * inv;
    out.policy_term = acc.policy_sum * inv;
    out.reg_term = hp.l2_coefficient * sq;
    out.total = hp.value_loss_ratio * out.value_term + out.policy_term + out.reg_term;
    return out;
}

LossBreakdown train_step(Network& net, std::span<const TrainingExample* const> batch,
                         const Hyperparams& hp, int threads) {
    if (batch.empty()) throw TrainStepError("empty batch");
    std::vector<double> grad;
    LossBreakdown breakdown = batch_loss_and_gradient(net.config(), net.layout(),
                                                      net.parameters(), batch, hp, grad, threads);
    for (double g : grad) {
        if (!std::isfinite(g)) throw TrainStepError("non-finite gradient, step aborted");
    }
    std::vector<double> theta = net.parameters();
    for (size_t i = 0; i < theta.size(); ++i) {
        theta[i] = quantize_to_f32(theta[i] - hp.learning_rate * grad[i]);
    }
    net.set_parameters(std::move(theta));
    return breakdown;
}

}  // namespace pbtzero
