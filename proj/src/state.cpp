#include "noon/state.hpp"

#include <cmath>
#include <sstream>

#include "noon/errors.hpp"

namespace noon {

double trace(const NoisyNoonState& s) {
    double t = s.vac;
    for (int i = 1; i <= s.cutoff; ++i) t += s.diag_a[i] + s.diag_b[i];
    return t;
}

void validate(const NoisyNoonState& s, double tol) {
    if (s.cutoff < 0) throw ValidationError("negative cutoff");
    const size_t want = static_cast<size_t>(s.cutoff) + 1;
    if (s.diag_a.size() != want || s.diag_b.size() != want || s.coh.size() != want)
        throw ValidationError("ladder arrays do not match cutoff");
    if (s.vac < -tol) throw ValidationError("negative vacuum weight");
    for (int i = 1; i <= s.cutoff; ++i) {
        if (s.diag_a[i] < -tol || s.diag_b[i] < -tol) {
            std::ostringstream os;
            os << "negative population at level " << i;
            throw ValidationError(os.str());
        }
        if (std::norm(s.coh[i]) > s.diag_a[i] * s.diag_b[i] + tol) {
            std::ostringstream os;
            os << "coherence at level " << i << " violates positivity: |coh|^2="
               << std::norm(s.coh[i]) << " > " << s.diag_a[i] * s.diag_b[i];
            throw ValidationError(os.str());
        }
    }
    const double t = trace(s);
    if (std::abs(t - 1.0) > tol) {
        std::ostringstream os;
        os << "trace deviates from 1 by " << t - 1.0;
        throw ValidationError(os.str());
    }
}

bool is_valid(const NoisyNoonState& s, double tol) noexcept {
    try {
        validate(s, tol);
        return true;
    } catch (...) {
        return false;
    }
}

static NoisyNoonState empty_state(int cutoff) {
    NoisyNoonState s;
    s.cutoff = cutoff;
    s.diag_a.assign(cutoff + 1, 0.0);
    s.diag_b.assign(cutoff + 1, 0.0);
    s.coh.assign(cutoff + 1, complexd{0.0, 0.0});
    return s;
}

NoisyNoonState pure_noon(int n) {
    if (n < 1) throw ValidationError("pure_noon requires N >= 1 (N=0 is the vacuum; use mixed_noon)");
    NoisyNoonState s = empty_state(n);
    s.diag_a[n] = 0.5;
    s.diag_b[n] = 0.5;
    s.coh[n] = 0.5;
    return s;
}

NoisyNoonState mixed_noon(const std::vector<double>& weights, double tol) {
    if (weights.empty()) throw ValidationError("mixed_noon requires at least the vacuum weight");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ValidationError("mixed_noon: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > tol) throw ValidationError("mixed_noon: weights do not sum to 1");
    const int cutoff = static_cast<int>(weights.size()) - 1;
    NoisyNoonState s = empty_state(cutoff);
    s.vac = weights[0];
    for (int n = 1; n <= cutoff; ++n) {
        s.diag_a[n] = weights[n] / 2.0;
        s.diag_b[n] = weights[n] / 2.0;
        s.coh[n] = weights[n] / 2.0;
    }
    return s;
}

NoisyNoonState vacuum_mix(double p, int n) {
    if (p < 0.0 || p > 1.0) throw ValidationError("vacuum_mix: p outside [0,1]");
    if (n < 1) throw ValidationError("vacuum_mix requires N >= 1");
    std::vector<double> w(n + 1, 0.0);
    w[0] = 1.0 - p;
    w[n] = p;
    return mixed_noon(w);
}

double fidelity_with_noon(const NoisyNoonState& s, int m) {
    if (m < 1 || m > s.cutoff) throw ValidationError("fidelity_with_noon: M outside 1..cutoff");
    return (s.diag_a[m] + s.diag_b[m]) / 2.0 + s.coh[m].real();
}

DenseHermitian to_dense(const NoisyNoonState& s) {
    const int n = s.cutoff;
    DenseHermitian h(1 + 3 * n);
    h(0, 0) = s.vac;
    for (int i = 1; i <= n; ++i) {
        const int a = i;           // |i,0>
        const int b = n + i;       // |0,i>
        h(a, a) = s.diag_a[i];
        h(b, b) = s.diag_b[i];
        h(a, b) = s.coh[i];
        h(b, a) = std::conj(s.coh[i]);
    }
    return h;
}

DenseHermitian to_dense_product(const NoisyNoonState& s) {
    const int d = s.cutoff + 1;
    DenseHermitian h(d * d);
    auto idx = [d](int i, int j) { return i * d + j; };
    h(idx(0, 0), idx(0, 0)) = s.vac;
    for (int i = 1; i <= s.cutoff; ++i) {
        h(idx(i, 0), idx(i, 0)) = s.diag_a[i];
        h(idx(0, i), idx(0, i)) = s.diag_b[i];
        h(idx(i, 0), idx(0, i)) = s.coh[i];
        h(idx(0, i), idx(i, 0)) = std::conj(s.coh[i]);
    }
    return h;
}

nlohmann::json to_json(const NoisyNoonState& s) {
    nlohmann::json j;
    j["cutoff"] = s.cutoff;
    j["vac"] = s.vac;
    j["diag_a"] = std::vector<double>(s.diag_a.begin() + 1, s.diag_a.end());
    j["diag_b"] = std::vector<double>(s.diag_b.begin() + 1, s.diag_b.end());
    nlohmann::json coh = nlohmann::json::array();
    for (int i = 1; i <= s.cutoff; ++i)
        coh.push_back({{"re", s.coh[i].real()}, {"im", s.coh[i].imag()}});
    j["coh"] = coh;
    return j;
}

NoisyNoonState state_from_json(const nlohmann::json& j) {
    NoisyNoonState s;
    try {
        s.cutoff = j.at("cutoff").get<int>();
        if (s.cutoff < 0) throw ValidationError("state_from_json: negative cutoff");
        s.vac = j.at("vac").get<double>();
        const auto da = j.at("diag_a").get<std::vector<double>>();
        const auto db = j.at("diag_b").get<std::vector<double>>();
        const auto& co = j.at("coh");
        if (static_cast<int>(da.size()) != s.cutoff || static_cast<int>(db.size()) != s.cutoff ||
            static_cast<int>(co.size()) != s.cutoff)
            throw ValidationError("state_from_json: ladder lengths do not match cutoff");
        s.diag_a.assign(s.cutoff + 1, 0.0);
        s.diag_b.assign(s.cutoff + 1, 0.0);
        s.coh.assign(s.cutoff + 1, complexd{0.0, 0.0});
        for (int i = 1; i <= s.cutoff; ++i) {
            s.diag_a[i] = da[i - 1];
            s.diag_b[i] = db[i - 1];
            s.coh[i] = complexd{co[i - 1].at("re").get<double>(), co[i - 1].at("im").get<double>()};
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("state_from_json: ") + e.what());
    }
    validate(s);
    return s;
}

} // namespace noon
