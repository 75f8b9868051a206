#include "agl/io_util.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace agl {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shortest form that still parses back to the same bits.
    for (int prec = 1; prec < 17; ++prec) {
        char trial[40];
        std::snprintf(trial, sizeof(trial), "%.*g", prec, v);
        if (std::strtod(trial, nullptr) == v) return trial;
    }
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

static std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> parse_header(const std::string& line) {
    std::map<std::string, std::string> out;
    std::string body = line;
    if (!body.empty() && body[0] == '#') body = body.substr(1);
    std::istringstream ss(body);
    std::string tok;
    while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return out;
}

std::map<std::string, std::string> parse_config(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not key = value: " + line);
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    for (const auto& tok : split(csv, ',')) {
        const std::string t = trim(tok);
        if (t.empty()) continue;
        out.push_back(std::stod(t));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (const auto& tok : split(csv, ',')) {
        const std::string t = trim(tok);
        if (t.empty()) continue;
        out.push_back(std::stoi(t));
    }
    return out;
}

}  // namespace agl
