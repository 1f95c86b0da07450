#pragma once

#include <complex>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace looplab {

inline constexpr const char* version = "0.1.0";

struct ReportEntry {
    std::string key;
    std::vector<std::pair<std::string, double>> inputs;
    std::complex<double> value;
    double abs = 0;
    double threshold = 0;
    bool pass = true;
};

/// Keyed residuals. add() keeps the worst case per key; keys stay in first-seen order.
class ResidualReport {
public:
    std::vector<std::pair<std::string, std::string>> metadata;

    void set_meta(const std::string& k, const std::string& v) {
        for (auto& m : metadata)
            if (m.first == k) {
                m.second = v;
                return;
            }
        metadata.emplace_back(k, v);
    }

    void add(const std::string& key, std::vector<std::pair<std::string, double>> inputs, std::complex<double> value,
             double threshold) {
        add(key, std::move(inputs), value, std::abs(value), threshold);
    }
    void add(const std::string& key, std::vector<std::pair<std::string, double>> inputs, std::complex<double> value,
             double absval, double threshold) {
        ReportEntry e{key, std::move(inputs), value, absval, threshold, absval <= threshold};
        auto it = index_.find(key);
        if (it == index_.end()) {
            index_[key] = entries_.size();
            entries_.push_back(std::move(e));
            return;
        }
        auto& cur = entries_[it->second];
        if (e.abs > cur.abs || (e.abs != e.abs && cur.abs == cur.abs)) cur = std::move(e);
    }
    /// merge another report, in its entry order
    void merge(const ResidualReport& o) {
        for (auto& e : o.entries_) add(e.key, e.inputs, e.value, e.abs, e.threshold);
    }

    const std::vector<ReportEntry>& entries() const { return entries_; }
    bool pass() const {
        for (auto& e : entries_)
            if (!e.pass) return false;
        return !entries_.empty();
    }
    int failures() const {
        int k = 0;
        for (auto& e : entries_) k += !e.pass;
        return k;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["metadata"] = nlohmann::ordered_json::object();
        for (auto& [k, v] : metadata) j["metadata"][k] = v;
        j["entries"] = nlohmann::ordered_json::array();
        for (auto& e : entries_) {
            nlohmann::ordered_json in = nlohmann::ordered_json::object();
            for (auto& [k, v] : e.inputs) in[k] = v;
            j["entries"].push_back({{"key", e.key},
                                    {"inputs", in},
                                    {"value_re", e.value.real()},
                                    {"value_im", e.value.imag()},
                                    {"abs", e.abs},
                                    {"threshold", e.threshold},
                                    {"pass", e.pass}});
        }
        j["pass"] = pass();
        return j;
    }

    std::string to_csv() const {
        std::string s = "key,inputs,value_re,value_im,abs,threshold,pass\n";
        for (auto& e : entries_) {
            std::string in;
            for (auto& [k, v] : e.inputs) in += (in.empty() ? "" : ";") + k + "=" + num(v);
            s += e.key + "," + in + "," + num(e.value.real()) + "," + num(e.value.imag()) + "," + num(e.abs) + "," +
                 num(e.threshold) + "," + (e.pass ? "pass" : "FAIL") + "\n";
        }
        return s;
    }

    std::string to_table() const {
        std::string s;
        char buf[256];
        for (auto& e : entries_) {
            std::snprintf(buf, sizeof buf, "%-28s %12.3e  <= %9.2e  %s\n", e.key.c_str(), e.abs, e.threshold,
                          e.pass ? "ok" : "FAIL");
            s += buf;
        }
        std::snprintf(buf, sizeof buf, "%d checks, %d failed\n", static_cast<int>(entries_.size()), failures());
        return s + buf;
    }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

private:
    std::vector<ReportEntry> entries_;
    std::map<std::string, std::size_t> index_;
};

} // namespace looplab
