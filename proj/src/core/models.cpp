#include "core/models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "core/errors.hpp"

namespace cdpa {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double sigmoid_deriv(double x) {
    const double f = sigmoid(x);
    return f * (1.0 - f);
}

double morlet(double z) { return std::cos(1.75 * z) * std::exp(-0.5 * z * z); }

double morlet_deriv(double z) {
    const double gauss = std::exp(-0.5 * z * z);
    return -1.75 * std::sin(1.75 * z) * gauss - z * std::cos(1.75 * z) * gauss;
}

Eigen::VectorXd normalize_hidden(const Eigen::VectorXd& raw) {
    if (raw.size() == 0) return raw;
    const double m = raw.cwiseAbs().maxCoeff();
    if (m == 0.0) return raw;
    return raw / m;
}

ElmanState::ElmanState(int input_size, int hidden_size, int output_size,
                       double alpha_) {
    if (input_size < 1 || hidden_size < 1 || output_size < 1)
        throw std::invalid_argument("ElmanState: sizes must be >= 1");
    w1 = Eigen::MatrixXd::Zero(hidden_size, output_size);
    w2 = Eigen::MatrixXd::Zero(input_size, hidden_size);
    w3 = Eigen::MatrixXd::Zero(hidden_size, hidden_size);
    context = Eigen::VectorXd::Zero(hidden_size);
    dh_dw2 = Eigen::MatrixXd::Zero(input_size, hidden_size);
    dh_dw3 = Eigen::MatrixXd::Zero(hidden_size, hidden_size);
    alpha = alpha_;
}

WaveletParams WaveletParams::seeded(int hidden_size, std::uint64_t seed,
                                    bool update_enabled_) {
    if (hidden_size < 1)
        throw std::invalid_argument("WaveletParams: hidden_size must be >= 1");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    WaveletParams wp;
    wp.a = Eigen::VectorXd::Ones(hidden_size);
    wp.b = Eigen::VectorXd::NullaryExpr(hidden_size,
                                        [&](Eigen::Index) { return normal(gen); });
    wp.update_enabled = update_enabled_;
    wp.da_mem = Eigen::VectorXd::Zero(hidden_size);
    wp.db_mem = Eigen::VectorXd::Zero(hidden_size);
    return wp;
}

namespace {

void check_input(const ElmanState& s, const Eigen::VectorXd& u) {
    if (u.size() != s.input_size())
        throw std::invalid_argument("forward: input length mismatch");
}

Eigen::VectorXd preactivation(const ElmanState& s, const Eigen::VectorXd& u) {
    return s.w2.transpose() * u + s.w3.transpose() * s.context;
}

} // namespace

ForwardResult benn_forward(ElmanState& state, const Eigen::VectorXd& u) {
    check_input(state, u);
    ElmanState::Cache c;
    c.kind = ElmanState::Cache::Kind::benn;
    c.preact = preactivation(state, u);
    c.hidden = c.preact.unaryExpr([](double v) { return sigmoid(v); });
    c.output = state.w1.transpose() * c.hidden;
    c.context_used = state.context;
    state.context = state.alpha * c.hidden;
    state.cache = c;
    return {state.cache.output, state.cache.hidden};
}

EwnnForwardResult ewnn_forward(ElmanState& state, const WaveletParams& wp,
                               const Eigen::VectorXd& u) {
    check_input(state, u);
    if (wp.a.size() != state.hidden_size() || wp.b.size() != state.hidden_size())
        throw std::invalid_argument("forward: wavelet parameter length mismatch");

    ElmanState::Cache c;
    c.kind = ElmanState::Cache::Kind::ewnn;
    c.preact = preactivation(state, u);
    const Eigen::VectorXd shifted = (c.preact - wp.b).cwiseQuotient(wp.a);
    const double denom = shifted.cwiseAbs().maxCoeff();
    c.norm_denom = denom > 0.0 ? denom : 1.0;
    c.z = denom > 0.0 ? Eigen::VectorXd(shifted / denom) : shifted;
    c.hidden = c.z.unaryExpr([](double v) { return morlet(v); });
    c.output = state.w1.transpose() * c.hidden;
    c.context_used = state.context;
    state.context = state.alpha * c.hidden;
    state.cache = c;
    return {state.cache.output, state.cache.hidden, state.cache.z};
}

namespace {

/// Shared gradient-descent body.  `gain` is the per-unit activation slope:
/// f'(preact) for the sigmoid network, morlet'(z) / max|z'| for the wavelet
/// one (dilation held at 1 either way).
double grad_step_common(ElmanState& s, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& y_d, const LearningRates& lr,
                        const Eigen::VectorXd& gain, Eigen::VectorXd* delta_h_out) {
    const ElmanState::Cache& c = s.cache;
    if (y_d.size() != s.output_size())
        throw std::invalid_argument("grad step: target length mismatch");

    const Eigen::VectorXd delta_o = y_d - c.output;
    const double err = 0.5 * delta_o.squaredNorm();
    const Eigen::VectorXd delta_h = s.w1 * delta_o;

    // Recursive sensitivities: dH_i/dw2(j,i) = gain_i (u_j + alpha w3_ii prev),
    // dH_i/dw3(k,i) = gain_i (alpha H_k(p-1) + alpha w3_ii prev); the
    // context_used vector already equals alpha * H(p-1).
    const Eigen::VectorXd rec = gain.cwiseProduct(s.alpha * s.w3.diagonal());
    Eigen::MatrixXd dh2 = u * gain.transpose() + s.dh_dw2 * rec.asDiagonal();
    Eigen::MatrixXd dh3 =
        c.context_used * gain.transpose() + s.dh_dw3 * rec.asDiagonal();

    if (!dh2.allFinite() || !dh3.allFinite() || !delta_h.allFinite())
        throw DivergenceError(0, "non-finite gradient");

    s.w1 += lr.w1 * (c.hidden * delta_o.transpose());
    s.w2 += lr.w2 * (dh2 * delta_h.asDiagonal());
    s.w3 += lr.w3 * (dh3 * delta_h.asDiagonal());
    s.dh_dw2 = std::move(dh2);
    s.dh_dw3 = std::move(dh3);
    if (delta_h_out) *delta_h_out = delta_h;
    return err;
}

} // namespace

double benn_grad_step(ElmanState& state, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& y_d, const LearningRates& rates) {
    check_input(state, u);
    if (state.cache.kind != ElmanState::Cache::Kind::benn)
        throw std::logic_error("benn_grad_step without a preceding benn_forward");
    const Eigen::VectorXd gain =
        state.cache.preact.unaryExpr([](double v) { return sigmoid_deriv(v); });
    const double err = grad_step_common(state, u, y_d, rates, gain, nullptr);
    state.cache.kind = ElmanState::Cache::Kind::none;
    return err;
}

double ewnn_grad_step(ElmanState& state, WaveletParams& wp,
                      const Eigen::VectorXd& u, const Eigen::VectorXd& y_d,
                      const LearningRates& rates) {
    check_input(state, u);
    if (state.cache.kind != ElmanState::Cache::Kind::ewnn)
        throw std::logic_error("ewnn_grad_step without a preceding ewnn_forward");

    const Eigen::VectorXd psi_prime =
        state.cache.z.unaryExpr([](double v) { return morlet_deriv(v); });
    const Eigen::VectorXd gain = psi_prime / state.cache.norm_denom;

    Eigen::VectorXd delta_h;
    const double err = grad_step_common(state, u, y_d, rates, gain, &delta_h);

    if (wp.update_enabled) {
        const Eigen::ArrayXd aw3 = (state.alpha * state.w3.diagonal()).array();
        const Eigen::ArrayXd psi = psi_prime.array();
        const Eigen::VectorXd dh_da =
            (psi * (-state.cache.z.array() / wp.a.array() + aw3 * wp.da_mem.array()))
                .matrix();
        const Eigen::VectorXd dh_db =
            (psi * (-1.0 / wp.a.array() + aw3 * wp.db_mem.array())).matrix();
        wp.a += rates.a * delta_h.cwiseProduct(dh_da);
        wp.b += rates.b * delta_h.cwiseProduct(dh_db);
        for (Eigen::Index i = 0; i < wp.a.size(); ++i) {
            if (std::abs(wp.a[i]) < 0.1) wp.a[i] = wp.a[i] < 0.0 ? -0.1 : 0.1;
        }
        wp.da_mem = dh_da;
        wp.db_mem = dh_db;
    }

    state.cache.kind = ElmanState::Cache::Kind::none;
    return err;
}

namespace {

nlohmann::json matrix_rows(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_rows(const nlohmann::json& rows, Eigen::Index nr,
                                 Eigen::Index nc) {
    Eigen::MatrixXd m(nr, nc);
    for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index c = 0; c < nc; ++c)
            m(r, c) = rows.at(r).at(c).get<double>();
    return m;
}

nlohmann::json vector_entries(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd vector_from(const nlohmann::json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr.at(i).get<double>();
    return v;
}

} // namespace

nlohmann::json model_to_json(const ElmanState& state, const WaveletParams* wp,
                             const std::string& kind, std::uint64_t seed) {
    nlohmann::json doc;
    doc["kind"] = kind;
    doc["input_size"] = state.input_size();
    doc["hidden_count"] = state.hidden_size();
    doc["output_size"] = state.output_size();
    doc["alpha"] = state.alpha;
    doc["seed"] = seed;
    doc["w1"] = matrix_rows(state.w1);
    doc["w2"] = matrix_rows(state.w2);
    doc["w3"] = matrix_rows(state.w3);
    if (wp) {
        doc["a"] = vector_entries(wp->a);
        doc["b"] = vector_entries(wp->b);
    }
    return doc;
}

LoadedModel model_from_json(const nlohmann::json& doc) {
    const int n = doc.at("input_size").get<int>();
    const int l = doc.at("hidden_count").get<int>();
    const int m = doc.at("output_size").get<int>();
    LoadedModel loaded{ElmanState(n, l, m, doc.at("alpha").get<double>()),
                       WaveletParams{}, false, doc.at("kind").get<std::string>(),
                       doc.at("seed").get<std::uint64_t>()};
    loaded.state.w1 = matrix_from_rows(doc.at("w1"), l, m);
    loaded.state.w2 = matrix_from_rows(doc.at("w2"), n, l);
    loaded.state.w3 = matrix_from_rows(doc.at("w3"), l, l);
    if (doc.contains("a")) {
        loaded.wavelet.a = vector_from(doc.at("a"));
        loaded.wavelet.b = vector_from(doc.at("b"));
        loaded.wavelet.da_mem = Eigen::VectorXd::Zero(l);
        loaded.wavelet.db_mem = Eigen::VectorXd::Zero(l);
        loaded.has_wavelet = true;
    }
    return loaded;
}

} // namespace cdpa
