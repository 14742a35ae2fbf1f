#pragma once
// Discipline taxonomy: maps document discipline codes onto top-level fields
// and flags which codes count as engineering. User-supplied as a TSV
// (code \t field \t [engineering]); the built-in default is six codes that
// are their own fields.

#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cflow {

class Taxonomy {
public:
    void add(const std::string& code, const std::string& field, bool engineering) {
        code_to_field_[code] = field;
        fields_.insert(field);
        if (engineering) engineering_codes_.insert(code);
    }

    const std::string* field_of(const std::string& code) const {
        auto it = code_to_field_.find(code);
        return it == code_to_field_.end() ? nullptr : &it->second;
    }

    bool is_engineering(const std::string& code) const { return engineering_codes_.count(code) > 0; }

    const std::set<std::string>& fields() const { return fields_; }
    size_t code_count() const { return code_to_field_.size(); }

    static Taxonomy default_taxonomy() {
        Taxonomy t;
        t.add("bio_health", "bio_health", false);
        t.add("physical_math", "physical_math", false);
        t.add("humanities", "humanities", false);
        t.add("engineering", "engineering", true);
        t.add("agriculture", "agriculture", false);
        t.add("social", "social", false);
        return t;
    }

    static Taxonomy load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open taxonomy: " + path);
        Taxonomy t;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            size_t t1 = line.find('\t');
            if (t1 == std::string::npos) throw std::runtime_error("malformed taxonomy line: " + line);
            size_t t2 = line.find('\t', t1 + 1);
            std::string code = line.substr(0, t1);
            std::string field = t2 == std::string::npos ? line.substr(t1 + 1)
                                                        : line.substr(t1 + 1, t2 - t1 - 1);
            bool eng = t2 != std::string::npos && line.substr(t2 + 1) == "engineering";
            t.add(code, field, eng);
        }
        return t;
    }

private:
    std::map<std::string, std::string> code_to_field_;
    std::set<std::string> fields_;
    std::set<std::string> engineering_codes_;
};

}  // namespace cflow
