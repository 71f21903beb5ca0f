#pragma once

#include <map>
#include <string>
#include <vector>

namespace wirt {

/// Command output: free-form human lines followed by a machine-readable
/// key/value section. Keys are sorted, values rendered canonically, so
/// identical inputs produce byte-identical reports.
struct Report {
    std::vector<std::string> human;
    std::map<std::string, std::string> machine;

    void line(std::string s) { human.push_back(std::move(s)); }
    void put(const std::string& key, std::string value) { machine[key] = std::move(value); }
    void put(const std::string& key, bool v) { machine[key] = v ? "true" : "false"; }
    void put(const std::string& key, int v) { machine[key] = std::to_string(v); }
    void put(const std::string& key, std::size_t v) { machine[key] = std::to_string(v); }

    std::string str() const {
        std::string out;
        for (const auto& l : human)
            out += l + "\n";
        out += "\n[machine]\n";
        for (const auto& [k, v] : machine)
            out += k + " = " + v + "\n";
        return out;
    }
};

}  // namespace wirt
