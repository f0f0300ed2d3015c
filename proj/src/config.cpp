#include "ncbcast/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ncbcast {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("not a boolean: '" + v + "'");
}

double parse_double(const std::string& v) {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("not a number: '" + v + "'");
    return x;
}

int parse_int(const std::string& v) {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("not an integer: '" + v + "'");
    return x;
}

// Matches "base[j]" and returns j (1-based), or 0 if the key is not indexed.
int indexed_key(const std::string& key, const std::string& base) {
    if (key.size() < base.size() + 3 || key.compare(0, base.size(), base) != 0) return 0;
    if (key[base.size()] != '[' || key.back() != ']') return 0;
    const std::string idx = key.substr(base.size() + 1, key.size() - base.size() - 2);
    const int j = parse_int(idx);
    if (j < 1) throw std::invalid_argument("receiver index must be >= 1 in key '" + key + "'");
    return j;
}

} // namespace

ConfigMap parse_config(std::istream& in) {
    ConfigMap cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value, got '" + stripped + "'");
        cfg[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
    }
    return cfg;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    return parse_config(in);
}

void apply_override(ConfigMap& cfg, const std::string& key_eq_value) {
    const auto eq = key_eq_value.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must be key=value, got '" + key_eq_value + "'");
    cfg[trim(key_eq_value.substr(0, eq))] = trim(key_eq_value.substr(eq + 1));
}

SystemParams params_from_config(const ConfigMap& cfg) {
    SystemParams p;
    auto get = [&](const char* key) -> const std::string* {
        const auto it = cfg.find(key);
        return it == cfg.end() ? nullptr : &it->second;
    };
    if (const auto* v = get("M")) p.M = parse_int(*v);
    if (const auto* v = get("N")) p.N = parse_int(*v);
    if (const auto* v = get("R")) p.R = parse_double(*v);
    if (const auto* v = get("n")) p.n = parse_double(*v);
    if (const auto* v = get("h")) p.h = parse_double(*v);
    if (const auto* v = get("g")) p.g = parse_double(*v);
    if (const auto* v = get("n_ack")) p.n_ack = parse_double(*v);
    if (const auto* v = get("strict_f_gate")) p.strict_f_gate = parse_bool(*v);
    if (const auto* v = get("ack_mode")) {
        if (*v == "non_interfering") p.ack_mode = AckMode::NonInterfering;
        else if (*v == "interfering") p.ack_mode = AckMode::Interfering;
        else throw std::invalid_argument("ack_mode must be non_interfering or interfering");
    }
    if (p.N < 1) throw std::invalid_argument("N must be >= 1");

    p.channels.assign(p.N, ChannelParams{});
    if (const auto* v = get("pe"))
        for (auto& ch : p.channels) ch.pe = parse_double(*v);
    if (const auto* v = get("pe_ack"))
        for (auto& ch : p.channels) ch.pe_ack = parse_double(*v);
    if (const auto* v = get("t_rt"))
        for (auto& ch : p.channels) ch.t_rt = parse_double(*v);

    for (const auto& [key, value] : cfg) {
        if (int j = indexed_key(key, "pe"); j) {
            if (j > p.N) throw std::invalid_argument("receiver index out of range in '" + key + "'");
            p.channels[j - 1].pe = parse_double(value);
        } else if (int k = indexed_key(key, "pe_ack"); k) {
            if (k > p.N) throw std::invalid_argument("receiver index out of range in '" + key + "'");
            p.channels[k - 1].pe_ack = parse_double(value);
        } else if (int l = indexed_key(key, "t_rt"); l) {
            if (l > p.N) throw std::invalid_argument("receiver index out of range in '" + key + "'");
            p.channels[l - 1].t_rt = parse_double(value);
        } else if (key != "M" && key != "N" && key != "R" && key != "n" && key != "h" &&
                   key != "g" && key != "n_ack" && key != "ack_mode" && key != "strict_f_gate" &&
                   key != "pe" && key != "pe_ack" && key != "t_rt") {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }

    // Receivers are numbered by ascending round-trip time.
    std::stable_sort(p.channels.begin(), p.channels.end(),
                     [](const ChannelParams& a, const ChannelParams& b) { return a.t_rt < b.t_rt; });
    p.validate();
    return p;
}

std::string canonical_config_string(const SystemParams& p) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out << buf;
    };
    out << "M=" << p.M << ";N=" << p.N << ";R=";
    num(p.R);
    out << ";n=";
    num(p.n);
    out << ";h=";
    num(p.h);
    out << ";g=";
    num(p.g);
    out << ";n_ack=";
    num(p.n_ack);
    out << ";ack_mode=" << (p.ack_mode == AckMode::NonInterfering ? "non_interfering" : "interfering");
    out << ";strict_f_gate=" << (p.strict_f_gate ? "true" : "false");
    for (int j = 0; j < p.N; ++j) {
        out << ";ch" << (j + 1) << "=";
        num(p.channels[j].pe);
        out << ",";
        num(p.channels[j].pe_ack);
        out << ",";
        num(p.channels[j].t_rt);
    }
    return out.str();
}

std::uint64_t config_hash(const SystemParams& p) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : canonical_config_string(p)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace ncbcast
