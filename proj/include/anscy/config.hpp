#pragma once

// System configuration and the shared derived scalars. All computation
// downstream runs in linear units (mW, meters); dBm appears only here at
// the configuration boundary.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace anscy {

inline double dbm_to_linear(double x_dbm) {
    if (!std::isfinite(x_dbm))
        throw std::invalid_argument("dbm_to_linear: non-finite input");
    return std::pow(10.0, x_dbm / 10.0);
}

inline double linear_to_dbm(double x_mw) {
    if (!(x_mw > 0.0))
        throw std::invalid_argument("linear_to_dbm: input must be positive");
    return 10.0 * std::log10(x_mw);
}

// Active-BS intensity after independent thinning by the non-empty-cell
// probability: (1 - exp(-lambda_u/lambda_b)) * lambda_b.
inline double thinned_bs_intensity(double lambda_b, double lambda_u) {
    if (!(lambda_b > 0.0))
        throw std::invalid_argument("thinned_bs_intensity: lambda_b must be positive");
    if (!(lambda_u >= 0.0))
        throw std::invalid_argument("thinned_bs_intensity: lambda_u must be non-negative");
    return -std::expm1(-lambda_u / lambda_b) * lambda_b;
}

// Which contamination term Eq.-style estimation uses: the printed 1-D
// integral, or the planar Campbell sum with its 2*pi*y Jacobian.
enum class CampbellMode { PaperLiteral, Planar2D };

struct SystemConfig {
    int n_t = 4;                 // BS antenna count
    double alpha = 3.0;          // pathloss exponent, > 2
    double p_tot_dbm = 30.0;     // total BS transmit power
    double phi = 0.5;            // power split: P_S = phi*P_tot
    double lambda_b = 1e-4;      // outside-BS intensity, per m^2
    double lambda_u = 1e-3;      // CU intensity, per m^2
    double lambda_e = 0.0;       // eavesdropper intensity, per m^2
    double r_c = 200.0;          // target-cell radius, m
    double n0_dbm = -50.0;       // receiver noise power
    double p_tau_dbm = 20.0;     // pilot power
    int tau = 4;                 // pilot length
    double sigma_e2 = 0.0;       // eavesdropper noise power (worst case 0)
    CampbellMode campbell_mode = CampbellMode::PaperLiteral;

    void validate() const {
        if (n_t < 2) throw std::invalid_argument("n_t must be at least 2");
        if (!(alpha > 2.0)) throw std::invalid_argument("alpha must exceed 2");
        if (!(phi >= 0.0 && phi <= 1.0)) throw std::invalid_argument("phi must lie in [0,1]");
        if (!(lambda_b > 0.0)) throw std::invalid_argument("lambda_b must be positive");
        if (!(lambda_u > 0.0)) throw std::invalid_argument("lambda_u must be positive");
        if (!(lambda_e >= 0.0)) throw std::invalid_argument("lambda_e must be non-negative");
        if (!(r_c > 0.0)) throw std::invalid_argument("r_c must be positive");
        if (tau < 1) throw std::invalid_argument("tau must be at least 1");
        if (!(sigma_e2 >= 0.0)) throw std::invalid_argument("sigma_e2 must be non-negative");
        if (!std::isfinite(p_tot_dbm) || !std::isfinite(n0_dbm) || !std::isfinite(p_tau_dbm))
            throw std::invalid_argument("powers must be finite");
    }

    double p_tot_mw() const { return dbm_to_linear(p_tot_dbm); }
    double p_s_mw() const { return phi * p_tot_mw(); }
    double p_a_mw() const { return (1.0 - phi) * p_tot_mw(); }
    double n0_mw() const { return dbm_to_linear(n0_dbm); }
    double p_tau_mw() const { return dbm_to_linear(p_tau_dbm); }
    double lambda_b_hat() const { return thinned_bs_intensity(lambda_b, lambda_u); }

    // Pilot-contamination term of the estimation-quality denominator.
    double contamination_sum() const {
        const double lh = lambda_b_hat();
        if (campbell_mode == CampbellMode::PaperLiteral)
            return lh * std::pow(r_c, 1.0 - alpha) / (alpha - 1.0);
        return 2.0 * M_PI * lh * std::pow(r_c, 2.0 - alpha) / (alpha - 2.0);
    }
};

struct WynerRates {
    double r_ts = 0.0;     // codeword rate, bits/s/Hz
    double r_e = 0.0;      // redundancy rate
    double r_s = 0.0;      // secrecy rate r_ts - r_e
    double beta_bs = 0.0;  // SINR threshold 2^r_ts - 1
    double beta_e = 0.0;   // SIR threshold 2^r_e - 1
};

inline WynerRates wyner_from_thresholds(double beta_bs, double beta_e) {
    if (!(beta_bs >= 0.0) || !(beta_e >= 0.0))
        throw std::invalid_argument("wyner_from_thresholds: thresholds must be non-negative");
    WynerRates w;
    w.beta_bs = beta_bs;
    w.beta_e = beta_e;
    w.r_ts = std::log2(1.0 + beta_bs);
    w.r_e = std::log2(1.0 + beta_e);
    w.r_s = w.r_ts - w.r_e;
    return w;
}

struct OutageConstraints {
    double sigma;    // connection outage cap
    double epsilon;  // secrecy outage cap

    void validate() const {
        if (!(sigma > 0.0 && sigma < 1.0))
            throw std::invalid_argument("sigma must lie strictly inside (0,1)");
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw std::invalid_argument("epsilon must lie strictly inside (0,1)");
    }
};

namespace detail {

inline bool parse_config_value(SystemConfig& cfg, const std::string& key,
                               const std::string& value) {
    auto num = [&] {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    };
    if (key == "n_t") cfg.n_t = static_cast<int>(num());
    else if (key == "alpha") cfg.alpha = num();
    else if (key == "p_tot_dbm") cfg.p_tot_dbm = num();
    else if (key == "phi") cfg.phi = num();
    else if (key == "lambda_b") cfg.lambda_b = num();
    else if (key == "lambda_u") cfg.lambda_u = num();
    else if (key == "lambda_e") cfg.lambda_e = num();
    else if (key == "r_c") cfg.r_c = num();
    else if (key == "n0_dbm") cfg.n0_dbm = num();
    else if (key == "p_tau_dbm") cfg.p_tau_dbm = num();
    else if (key == "tau") cfg.tau = static_cast<int>(num());
    else if (key == "sigma_e2") cfg.sigma_e2 = num();
    else if (key == "campbell_mode") {
        if (value == "PaperLiteral") cfg.campbell_mode = CampbellMode::PaperLiteral;
        else if (value == "Planar2D") cfg.campbell_mode = CampbellMode::Planar2D;
        else throw std::invalid_argument("campbell_mode must be PaperLiteral or Planar2D");
    } else return false;
    return true;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

// Applies key=value lines onto an existing config (presets use this for
// partial overrides). One key per line, '#' comments. Unknown keys and
// invalid values are errors that name the key and line.
inline void load_config_into(SystemConfig& cfg, std::istream& in, const std::string& name) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                        ": expected key=value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        try {
            if (!detail::parse_config_value(cfg, key, value))
                throw std::invalid_argument("unknown key");
        } catch (const std::exception& e) {
            throw std::invalid_argument(name + ":" + std::to_string(line_no) + ": key '" +
                                        key + "': " + e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw std::invalid_argument(name + ": " + e.what());
    }
}

inline SystemConfig load_config(std::istream& in, const std::string& name) {
    SystemConfig cfg;
    load_config_into(cfg, in, name);
    return cfg;
}

inline SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return load_config(in, path);
}

inline void save_config(const SystemConfig& cfg, std::ostream& out) {
    auto put = [&](const char* k, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << k << "=" << buf << "\n";
    };
    out << "n_t=" << cfg.n_t << "\n";
    put("alpha", cfg.alpha);
    put("p_tot_dbm", cfg.p_tot_dbm);
    put("phi", cfg.phi);
    put("lambda_b", cfg.lambda_b);
    put("lambda_u", cfg.lambda_u);
    put("lambda_e", cfg.lambda_e);
    put("r_c", cfg.r_c);
    put("n0_dbm", cfg.n0_dbm);
    put("p_tau_dbm", cfg.p_tau_dbm);
    out << "tau=" << cfg.tau << "\n";
    put("sigma_e2", cfg.sigma_e2);
    out << "campbell_mode="
        << (cfg.campbell_mode == CampbellMode::PaperLiteral ? "PaperLiteral" : "Planar2D")
        << "\n";
}

inline void save_config(const SystemConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open for write: " + path);
    save_config(cfg, out);
}

}  // namespace anscy
