#include "network.h"

#include <algorithm>
#include <cmath>

#include "layers.h"
#include "rng.h"

namespace pbtzero {

bool NetworkConfig::valid() const {
    if (board_size < kMinBoardSize || board_size > kMaxBoardSize) return false;
    if (residual_blocks < 1 || filters < 1) return false;
    if (value_head == ValueHeadKind::MultiKomi) {
        if (komi_values.empty()) return false;
        for (size_t i = 1; i < komi_values.size(); ++i) {
            if (!(komi_values[i] > komi_values[i - 1])) return false;
        }
    } else if (!komi_values.empty()) {
        return false;
    }
    return true;
}

NetLayout NetLayout::build(const NetworkConfig& cfg) {
    const size_t n2 = static_cast<size_t>(cfg.board_size) * cfg.board_size;
    const size_t f = cfg.filters;
    const size_t vout = cfg.value_outputs();
    NetLayout l;
    size_t off = 0;
    auto take = [&off](size_t count) {
        size_t at = off;
        off += count;
        return at;
    };
    l.stem_w = take(9 * kFeaturePlanes * f);
    l.stem_b = take(f);
    l.blocks.resize(cfg.residual_blocks);
    for (auto& b : l.blocks) {
        b.w1 = take(9 * f * f);
        b.b1 = take(f);
        b.w2 = take(9 * f * f);
        b.b2 = take(f);
    }
    l.pconv_w = take(2 * f);
    l.pconv_b = take(2);
    l.pfc_w = take(2 * n2 * (n2 + 1));
    l.pfc_b = take(n2 + 1);
    l.vconv_w = take(f);
    l.vconv_b = take(1);
    l.vfc_w = take(n2 * vout);
    l.vfc_b = take(vout);
    l.total = off;
    return l;
}

void NetWorkspace::resize_for(const NetworkConfig& cfg) {
    const size_t n2 = static_cast<size_t>(cfg.board_size) * cfg.board_size;
    const size_t f = cfg.filters;
    const size_t b = cfg.residual_blocks;
    input.resize(kFeaturePlanes * n2);
    trunk.resize((b + 1) * f * n2);
    t1.resize(b * f * n2);
    pc.resize(2 * n2);
    logits.resize(n2 + 1);
    p.resize(n2 + 1);
    vc.resize(n2);
    v.resize(cfg.value_outputs());
    d_a.resize(f * n2);
    d_b.resize(f * n2);
    d_t1.resize(f * n2);
    d_pc.resize(2 * n2);
    d_vc.resize(n2);
    d_logits.resize(n2 + 1);
    d_v.resize(cfg.value_outputs());
}

void run_forward(const NetworkConfig& cfg, const NetLayout& layout, const double* theta,
                 const double* input, NetWorkspace& ws) {
    const int n = cfg.board_size;
    const int n2 = n * n;
    const int f = cfg.filters;
    const size_t map = static_cast<size_t>(f) * n2;

    std::copy(input, input + kFeaturePlanes * n2, ws.input.begin());

    double* a0 = ws.trunk.data();
    conv3x3(ws.input.data(), a0, theta + layout.stem_w, theta + layout.stem_b, n, kFeaturePlanes,
            f);
    relu_inplace(a0, map);

    for (int b = 0; b < cfg.residual_blocks; ++b) {
        const double* prev = ws.trunk.data() + b * map;
        double* mid = ws.t1.data() + b * map;
        double* out = ws.trunk.data() + (b + 1) * map;
        const auto& blk = layout.blocks[b];
        conv3x3(prev, mid, theta + blk.w1, theta + blk.b1, n, f, f);
        relu_inplace(mid, map);
        conv3x3(mid, out, theta + blk.w2, theta + blk.b2, n, f, f);
        for (size_t i = 0; i < map; ++i) out[i] += prev[i];
        relu_inplace(out, map);
    }

    const double* top = ws.trunk.data() + cfg.residual_blocks * map;

    conv1x1(top, ws.pc.data(), theta + layout.pconv_w, theta + layout.pconv_b, n2, f, 2);
    relu_inplace(ws.pc.data(), 2 * n2);
    fully_connected(ws.pc.data(), ws.logits.data(), theta + layout.pfc_w, theta + layout.pfc_b,
                    2 * n2, n2 + 1);
    softmax(ws.logits.data(), ws.p.data(), n2 + 1);

    conv1x1(top, ws.vc.data(), theta + layout.vconv_w, theta + layout.vconv_b, n2, f, 1);
    relu_inplace(ws.vc.data(), n2);
    const int vout = cfg.value_outputs();
    fully_connected(ws.vc.data(), ws.v.data(), theta + layout.vfc_w, theta + layout.vfc_b, n2,
                    vout);
    for (int i = 0; i < vout; ++i) ws.v[i] = std::tanh(ws.v[i]);
}

Network::Network(NetworkConfig cfg) : cfg_(std::move(cfg)), layout_(NetLayout::build(cfg_)) {
    if (!cfg_.valid()) throw std::invalid_argument("invalid network config");
    theta_.assign(layout_.total, 0.0);
}

Network Network::init(const NetworkConfig& cfg, uint64_t seed) {
    Network net(cfg);
    Rng rng(mix_seed(seed, 0x6e657477ULL));
    auto fill_uniform = [&](size_t off, size_t count, size_t fan_in) {
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        for (size_t i = 0; i < count; ++i) {
            net.theta_[off + i] = quantize_to_f32((rng.next_double() * 2.0 - 1.0) * bound);
        }
    };
    const auto& l = net.layout_;
    const size_t n2 = static_cast<size_t>(cfg.board_size) * cfg.board_size;
    const size_t f = cfg.filters;
    fill_uniform(l.stem_w, 9 * kFeaturePlanes * f, 9 * kFeaturePlanes);
    for (const auto& b : l.blocks) {
        fill_uniform(b.w1, 9 * f * f, 9 * f);
        fill_uniform(b.w2, 9 * f * f, 9 * f);
    }
    fill_uniform(l.pconv_w, 2 * f, f);
    fill_uniform(l.pfc_w, 2 * n2 * (n2 + 1), 2 * n2);
    fill_uniform(l.vconv_w, f, f);
    fill_uniform(l.vfc_w, n2 * cfg.value_outputs(), n2);
    // biases stay zero
    return net;
}

void Network::set_parameters(std::vector<double> theta) {
    if (theta.size() != layout_.total) throw std::invalid_argument("parameter count mismatch");
    for (auto& x : theta) {
        if (!std::isfinite(x)) throw std::invalid_argument("non-finite parameter");
        x = quantize_to_f32(x);
    }
    theta_ = std::move(theta);
}

NetworkOutput Network::forward(const FeatureTensor& features) const {
    NetWorkspace ws;
    return forward(features, ws);
}

NetworkOutput Network::forward(const FeatureTensor& features, NetWorkspace& ws) const {
    if (features.board_size != cfg_.board_size || features.planes != kFeaturePlanes ||
        features.data.size() != static_cast<size_t>(kFeaturePlanes) * cfg_.board_size *
                                    cfg_.board_size) {
        throw std::invalid_argument("feature tensor does not match network config");
    }
    ws.resize_for(cfg_);
    std::vector<double> in(features.data.begin(), features.data.end());
    run_forward(cfg_, layout_, theta_.data(), in.data(), ws);
    NetworkOutput out;
    out.p = ws.p;
    out.v = ws.v;
    return out;
}

LossBreakdown compute_loss(const NetworkOutput& output, const std::vector<double>& target_pi,
                           const std::vector<double>& z, const Hyperparams& hp,
                           const std::vector<double>& theta) {
    if (target_pi.size() != output.p.size())
        throw std::invalid_argument("policy target size mismatch");
    if (z.size() != output.v.size()) throw std::invalid_argument("value target size mismatch");
    double pi_sum = 0.0;
    for (double x : target_pi) {
        if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("invalid policy target");
        pi_sum += x;
    }
    if (std::abs(pi_sum - 1.0) > 1e-6) throw std::invalid_argument("policy target not normalized");
    for (double x : z) {
        if (x != -1.0 && x != 0.0 && x != 1.0)
            throw std::invalid_argument("z component outside {-1, 0, +1}");
    }

    LossBreakdown out;
    for (size_t k = 0; k < z.size(); ++k) {
        const double d = z[k] - output.v[k];
        out.value_term += d * d;
    }
    out.value_term /= static_cast<double>(z.size());

    for (size_t a = 0; a < target_pi.size(); ++a) {
        if (target_pi[a] == 0.0) continue;
        if (!(output.p[a] > 0.0))
            throw std::invalid_argument("policy assigns zero mass to a target move");
        out.policy_term -= target_pi[a] * std::log(output.p[a]);
    }

    double sq = 0.0;
    for (double w : theta) sq += w * w;
    out.reg_term = hp.l2_coefficient * sq;

    out.total = hp.value_loss_ratio * out.value_term + out.policy_term + out.reg_term;
    if (!std::isfinite(out.total)) throw std::invalid_argument("non-finite loss");
    return out;
}

double value_for_komi(const NetworkOutput& output, const NetworkConfig& cfg, double komi) {
    if (cfg.value_head == ValueHeadKind::Single) return output.v[0];
    for (size_t i = 0; i < cfg.komi_values.size(); ++i) {
        if (cfg.komi_values[i] == komi) return output.v[i];
    }
    throw std::out_of_range("komi " + std::to_string(komi) + " not in the configured value head");
}

}  // namespace pbtzero
