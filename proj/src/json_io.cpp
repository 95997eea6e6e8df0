#include "gcms/json_io.hpp"

#include <cstdio>

#include <json.hpp>

#include "gcms/errors.hpp"

namespace gcms {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

void JsonWriter::separator() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!first_in_scope_.back()) out_ += ",";
    first_in_scope_.back() = false;
}

JsonWriter& JsonWriter::begin_object() {
    separator();
    out_ += "{";
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += "}";
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separator();
    out_ += "[";
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += "]";
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    separator();
    out_ += "\"" + json_escape(k) + "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    separator();
    out_ += "\"" + json_escape(v) + "\"";
    return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::value(double v) {
    separator();
    out_ += fmt17(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(int v) { return value(static_cast<std::int64_t>(v)); }
JsonWriter& JsonWriter::value(unsigned v) { return value(static_cast<std::uint64_t>(v)); }

JsonWriter& JsonWriter::value(bool v) {
    separator();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::raw(const std::string& fragment) {
    separator();
    out_ += fragment;
    return *this;
}

void write_word(JsonWriter& w, const Word& word) {
    w.begin_array();
    for (Symbol s : word) w.value(static_cast<std::uint64_t>(s));
    w.end_array();
}

void write_root(JsonWriter& w, const Root& root) {
    if (root.is_all()) {
        w.value("all");
        return;
    }
    w.begin_array();
    for (Symbol s : root.symbols()) w.value(static_cast<std::uint64_t>(s));
    w.end_array();
}

void write_configuration(JsonWriter& w, const Configuration& xi) {
    w.begin_object();
    if (xi.has_finite_stem()) {
        w.key("stem");
        write_word(w, xi.finite_stem());
        w.key("root");
        write_root(w, xi.root());
    } else {
        w.key("stem").value("infinite:" + xi.infinite_stem().preset_name());
    }
    w.end_object();
}

void write_class_report(JsonWriter& w, const ClassReport& rep) {
    w.begin_object();
    w.key("horizon").value(static_cast<std::uint64_t>(rep.horizon));
    w.key("single_empty_word").value(to_string(rep.single_empty_word));
    w.key("periodic_renewal").value(to_string(rep.periodic_renewal));
    w.key("column_finite").value(to_string(rep.column_finite));
    w.key("compact_x_a").value(to_string(rep.compact_x_a));
    w.key("evidence").begin_array();
    for (const auto& e : rep.evidence) w.value(e);
    w.end_array();
    w.end_object();
}

void write_extension_verdict(JsonWriter& w, const ExtensionVerdict& verdict) {
    w.begin_object();
    if (const auto* ext = std::get_if<Extendable>(&verdict)) {
        w.key("verdict").value("extendable");
        w.key("certificate").value(ext->certificate);
        w.key("empty_word_dynamics").begin_array();
        for (const auto& [from, to] : ext->empty_word_dynamics) {
            w.begin_object();
            w.key("from");
            write_configuration(w, from);
            w.key("to");
            write_configuration(w, to);
            w.end_object();
        }
        w.end_array();
    } else if (const auto* ne = std::get_if<NotExtendable>(&verdict)) {
        w.key("verdict").value("not-extendable");
        w.key("witness_a").value(ne->witness_a.str());
        w.key("witness_b").value(ne->witness_b.str());
        w.key("common_limit");
        write_root(w, ne->common_limit);
        w.key("shift_limit_a").value(ne->limit_a.str());
        w.key("shift_limit_b").value(ne->limit_b.str());
        w.key("note").value(ne->note);
    } else {
        w.key("verdict").value("undecided");
        w.key("horizon").value(static_cast<std::uint64_t>(std::get<Undecided>(verdict).horizon));
    }
    w.end_object();
}

void write_measure(JsonWriter& w, const AtomicMeasure& mu) {
    w.begin_object();
    w.key("c_empty").value(mu.c_empty);
    w.key("tail_bound").value(mu.tail_bound);
    w.key("truncation_length").value(static_cast<std::uint64_t>(mu.truncation_length));
    w.key("tail_certificate").value(mu.tail_certificate);
    if (mu.root_tag) {
        w.key("root_tag");
        write_root(w, *mu.root_tag);
    }
    w.key("atoms").begin_array();
    for (const auto& [xi, weight] : mu.atoms) {
        w.begin_object();
        w.key("stem");
        write_word(w, xi.finite_stem());
        w.key("root");
        write_root(w, xi.root());
        w.key("weight").value(weight);
        w.end_object();
    }
    w.end_array();
    w.end_object();
}

void write_check_report(JsonWriter& w, const CheckReport& rep) {
    w.begin_object();
    w.key("pass").value(rep.pass);
    w.key("worst").value(rep.worst);
    w.key("worst_at").value(rep.worst_at);
    w.key("checked").value(static_cast<std::uint64_t>(rep.checked));
    w.end_object();
}

void write_spectral_result(JsonWriter& w, const SpectralResult& res) {
    w.begin_object();
    w.key("radius").value(res.radius);
    w.key("branch").value(res.branch);
    w.key("certificate").value(res.certificate);
    w.end_object();
}

GAElement parse_weight_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("weight JSON: ") + e.what(), 1, static_cast<int>(e.byte));
    }
    GAElement el;
    auto to_coef = [](const nlohmann::json& v) -> Coef {
        if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
        if (v.is_number()) return {v.get<double>(), 0.0};
        throw PreconditionError("BadWeight", "lambda must be a number or [re, im]");
    };
    if (j.contains("lambda0")) el.lambda0 = to_coef(j["lambda0"]);
    if (j.contains("terms")) {
        for (const auto& t : j["terms"]) {
            ProjectionTerm term;
            for (const auto& s : t.at("gamma")) term.gamma.push_back(s.get<Symbol>());
            if (t.contains("F")) {
                for (const auto& s : t["F"]) term.f.push_back(s.get<Symbol>());
            }
            el.terms.emplace_back(to_coef(t.at("lambda")), std::move(term));
        }
    }
    return el;
}

}  // namespace gcms
