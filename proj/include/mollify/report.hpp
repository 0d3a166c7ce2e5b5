#pragma once

#include <string>
#include <vector>

#include "mollify/approx.hpp"
#include "mollify/convolve.hpp"

namespace mollify {

/// Doubles render with 17 significant digits so identical runs produce
/// byte-identical reports.
std::string format_double(double v);

/// Minimal JSON emitter with insertion-ordered keys and the fixed double
/// format above.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array(const std::string& key);
    JsonWriter& end_array();
    JsonWriter& field(const std::string& key, double v);
    JsonWriter& field(const std::string& key, long v);
    JsonWriter& field(const std::string& key, int v);
    JsonWriter& field(const std::string& key, const std::string& v);
    JsonWriter& element(double v);
    JsonWriter& begin_object_element();
    JsonWriter& key_object(const std::string& key);  // "key": { ...

    std::string str() const { return out_; }

private:
    void comma();
    void key(const std::string& k);

    std::string out_;
    std::vector<bool> first_;
};

std::string sweep_csv(const ApproximationReport& report);
std::string sweep_json(const ApproximationReport& report);

std::string certified_csv(const CertifiedPolynomial& cp);
std::string certified_json(const CertifiedPolynomial& cp);

/// Plot-ready two-column text (x value per line).
std::string curve_text(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace mollify
