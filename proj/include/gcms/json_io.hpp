#pragma once

#include <string>
#include <vector>

#include "gcms/conformal.hpp"
#include "gcms/configuration.hpp"
#include "gcms/dynamics.hpp"
#include "gcms/spectral.hpp"
#include "gcms/transition_matrix.hpp"

namespace gcms {

// Minimal JSON writer with deterministic layout. Floating values are written
// with 17 significant digits so documents round-trip losslessly.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v);
    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(int v);
    JsonWriter& value(unsigned v);
    JsonWriter& value(bool v);
    JsonWriter& raw(const std::string& fragment);

    std::string str() const { return out_; }

private:
    void separator();
    std::string out_;
    std::vector<bool> first_in_scope_{true};
    bool pending_key_ = false;
};

std::string fmt17(double v);
std::string json_escape(const std::string& s);

void write_word(JsonWriter& w, const Word& word);
void write_root(JsonWriter& w, const Root& root);
void write_configuration(JsonWriter& w, const Configuration& xi);
void write_class_report(JsonWriter& w, const ClassReport& rep);
void write_extension_verdict(JsonWriter& w, const ExtensionVerdict& verdict);
void write_measure(JsonWriter& w, const AtomicMeasure& mu);
void write_check_report(JsonWriter& w, const CheckReport& rep);
void write_spectral_result(JsonWriter& w, const SpectralResult& res);

// {"lambda0": [re, im], "terms": [{"gamma": [...], "F": [...], "lambda": [re, im]}]}
GAElement parse_weight_json(const std::string& text);

}  // namespace gcms
