#include "autfol/groupfile.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace autfol {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

GroupSpec from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::syntax_error, std::string("group file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("p") || !j.contains("exponents"))
        fail(errc::syntax_error, "group file must define 'p' and 'exponents'");
    std::vector<int> exps;
    for (const auto& v : j.at("exponents")) exps.push_back(v.get<int>());
    return GroupSpec::make(j.at("p").get<std::int64_t>(), exps);
}

GroupSpec from_key_value(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::int64_t p = 0;
    bool saw_p = false;
    std::vector<int> exps;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(errc::syntax_error, "group file: expected key=value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "p") {
            p = std::stoll(value);
            saw_p = true;
        } else if (key == "exponents") {
            std::istringstream vs(value);
            std::string item;
            while (std::getline(vs, item, ',')) {
                item = trim(item);
                if (!item.empty()) exps.push_back(std::stoi(item));
            }
        } else {
            fail(errc::syntax_error, "group file: unknown key '" + key + "'");
        }
    }
    if (!saw_p) fail(errc::syntax_error, "group file: missing 'p'");
    return GroupSpec::make(p, exps);
}

} // namespace

GroupSpec parse_group_text(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) fail(errc::syntax_error, "empty group definition");
    try {
        if (t[0] == '{') return from_json(t);
        return from_key_value(t);
    } catch (const std::invalid_argument&) {
        fail(errc::syntax_error, "group file: malformed integer");
    } catch (const std::out_of_range&) {
        fail(errc::syntax_error, "group file: integer out of range");
    }
}

GroupSpec load_group_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(errc::io_error, "cannot open group file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_group_text(ss.str());
}

} // namespace autfol
