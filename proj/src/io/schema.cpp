#include <map>
#include <regex>

#include "qf/error.hpp"
#include "qf/io.hpp"

namespace qf::io {

namespace detail {
// Generated from schemas/ at configure time.
extern const std::vector<std::pair<std::string, std::string>> kEmbeddedSchemas;
}  // namespace detail

namespace {

const std::map<std::string, json>& documents() {
    static const std::map<std::string, json> docs = [] {
        std::map<std::string, json> out;
        for (const auto& [file, text] : detail::kEmbeddedSchemas) out.emplace(file, json::parse(text));
        return out;
    }();
    return docs;
}

std::string file_of(const std::string& name) {
    return name.ends_with(".schema.json") ? name : name + ".schema.json";
}

std::string type_name(const json& v) {
    if (v.is_null()) return "null";
    if (v.is_boolean()) return "boolean";
    if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
    if (v.is_number()) return "number";
    if (v.is_string()) return "string";
    if (v.is_array()) return "array";
    return "object";
}

bool has_type(const json& v, const std::string& t) {
    if (t == "number") return v.is_number();
    if (t == "integer") {
        if (v.is_number_integer() || v.is_number_unsigned()) return true;
        if (!v.is_number_float()) return false;
        const double x = v.get<double>();
        return std::isfinite(x) && x == std::floor(x);
    }
    return type_name(v) == t;
}

std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

struct Failure {
    std::string pointer;
    std::string message;
};

class Validator {
public:
    // Returns the first failure, if any.
    std::optional<Failure> check(const json& v, const json& s, const json& doc, const std::string& ptr) const {
        if (s.is_boolean()) {
            if (s.get<bool>()) return std::nullopt;
            return Failure{ptr, "no value is allowed here"};
        }
        if (auto it = s.find("$ref"); it != s.end()) {
            const auto [target, target_doc] = resolve(it->get<std::string>(), doc);
            if (auto f = check(v, *target, *target_doc, ptr)) return f;
        }
        if (auto it = s.find("type"); it != s.end()) {
            bool ok = false;
            std::string expected;
            const auto types = it->is_array() ? *it : json::array({*it});
            for (const auto& t : types) {
                ok = ok || has_type(v, t.get<std::string>());
                expected += (expected.empty() ? "" : " or ") + t.get<std::string>();
            }
            if (!ok) return Failure{ptr, "expected " + expected + ", found " + type_name(v)};
        }
        if (auto it = s.find("const"); it != s.end() && v != *it) {
            return Failure{ptr, "expected the value " + it->dump()};
        }
        if (auto it = s.find("enum"); it != s.end()) {
            if (std::find(it->begin(), it->end(), v) == it->end()) return Failure{ptr, "expected one of " + it->dump()};
        }
        if (v.is_number()) {
            const double x = v.get<double>();
            if (!std::isfinite(x)) return Failure{ptr, "number is not finite"};
            if (auto it = s.find("minimum"); it != s.end() && x < it->get<double>())
                return Failure{ptr, "must be at least " + it->dump()};
            if (auto it = s.find("maximum"); it != s.end() && x > it->get<double>())
                return Failure{ptr, "must be at most " + it->dump()};
            if (auto it = s.find("exclusiveMinimum"); it != s.end() && x <= it->get<double>())
                return Failure{ptr, "must exceed " + it->dump()};
            if (auto it = s.find("exclusiveMaximum"); it != s.end() && x >= it->get<double>())
                return Failure{ptr, "must be below " + it->dump()};
        }
        if (v.is_string()) {
            const auto& str = v.get_ref<const std::string&>();
            if (auto it = s.find("minLength"); it != s.end() && str.size() < it->get<std::size_t>())
                return Failure{ptr, "string too short"};
            if (auto it = s.find("pattern"); it != s.end() && !std::regex_search(str, std::regex(it->get<std::string>())))
                return Failure{ptr, "does not match " + it->get<std::string>()};
        }
        if (v.is_array()) {
            if (auto it = s.find("minItems"); it != s.end() && v.size() < it->get<std::size_t>())
                return Failure{ptr, "needs at least " + it->dump() + " items"};
            if (auto it = s.find("maxItems"); it != s.end() && v.size() > it->get<std::size_t>())
                return Failure{ptr, "allows at most " + it->dump() + " items"};
            if (auto it = s.find("items"); it != s.end()) {
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (auto f = check(v[i], *it, doc, ptr + "/" + std::to_string(i))) return f;
                }
            }
        }
        if (v.is_object()) {
            if (auto it = s.find("required"); it != s.end()) {
                for (const auto& k : *it) {
                    if (!v.contains(k.get<std::string>())) return Failure{ptr + "/" + escape(k.get<std::string>()), "required field missing"};
                }
            }
            const auto props = s.find("properties");
            for (const auto& [k, child] : v.items()) {
                const std::string p = ptr + "/" + escape(k);
                if (props != s.end() && props->contains(k)) {
                    if (auto f = check(child, (*props)[k], doc, p)) return f;
                } else if (auto extra = s.find("additionalProperties"); extra != s.end()) {
                    if (extra->is_boolean() && !extra->get<bool>()) return Failure{p, "unknown field"};
                    if (auto f = check(child, *extra, doc, p)) return f;
                }
            }
        }
        if (auto it = s.find("oneOf"); it != s.end()) {
            int matches = 0;
            std::optional<Failure> deepest;
            for (const auto& alt : *it) {
                auto f = check(v, alt, doc, ptr);
                if (!f) {
                    ++matches;
                } else if (!deepest || f->pointer.size() > deepest->pointer.size()) {
                    deepest = f;
                }
            }
            if (matches == 0) {
                if (deepest && deepest->pointer != ptr) return deepest;
                return Failure{ptr, "matches none of the alternatives" + (deepest ? " (" + deepest->message + ")" : "")};
            }
            if (matches > 1) return Failure{ptr, "matches more than one alternative"};
        }
        return std::nullopt;
    }

private:
    std::pair<const json*, const json*> resolve(const std::string& ref, const json& doc) const {
        const auto hash = ref.find('#');
        const std::string file = ref.substr(0, hash);
        const std::string fragment = hash == std::string::npos ? "" : ref.substr(hash + 1);
        const json* target_doc = &doc;
        if (!file.empty()) {
            const auto it = documents().find(file);
            if (it == documents().end()) throw Error("schema reference to unknown file " + file);
            target_doc = &it->second;
        }
        const json* target = fragment.empty() ? target_doc : &target_doc->at(json::json_pointer(fragment));
        return {target, target_doc};
    }
};

}  // namespace

std::vector<std::string> schema_names() {
    std::vector<std::string> out;
    for (const auto& [file, doc] : documents()) out.push_back(file.substr(0, file.size() - std::string(".schema.json").size()));
    return out;
}

const json& schema(const std::string& name) {
    const auto it = documents().find(file_of(name));
    if (it == documents().end()) throw std::invalid_argument("no schema named " + name);
    return it->second;
}

void validate(const json& doc, const std::string& schema_name, const std::string& base) {
    const json& s = schema(schema_name);
    if (auto f = Validator{}.check(doc, s, s, "")) throw SchemaError(base + f->pointer, f->message);
}

}  // namespace qf::io
