#include "mollify/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mollify {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void JsonWriter::comma() {
    if (!first_.empty()) {
        if (!first_.back()) out_ += ",";
        first_.back() = false;
    }
}

void JsonWriter::key(const std::string& k) {
    comma();
    out_ += "\"" + k + "\":";
}

JsonWriter& JsonWriter::begin_object() {
    out_ += "{";
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += "}";
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& k) {
    key(k);
    out_ += "[";
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += "]";
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, double v) {
    key(k);
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, long v) {
    key(k);
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, int v) {
    key(k);
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, const std::string& v) {
    key(k);
    out_ += "\"";
    for (char c : v) {
        if (c == '"' || c == '\\') out_ += '\\';
        out_ += c;
    }
    out_ += "\"";
    return *this;
}

JsonWriter& JsonWriter::element(double v) {
    comma();
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::begin_object_element() {
    comma();
    out_ += "{";
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::key_object(const std::string& k) {
    key(k);
    out_ += "{";
    first_.push_back(true);
    return *this;
}

std::string sweep_csv(const ApproximationReport& report) {
    std::string out = "t,sup_error,tail_bound,grid_points\n";
    for (const SweepEntry& e : report.entries) {
        out += format_double(e.t) + "," + format_double(e.sup_error) + "," +
               format_double(e.tail_bound) + "," + std::to_string(e.grid_points) + "\n";
    }
    return out;
}

std::string sweep_json(const ApproximationReport& report) {
    JsonWriter w;
    w.begin_object();
    w.begin_array("entries");
    for (const SweepEntry& e : report.entries) {
        w.begin_object_element();
        w.field("t", e.t);
        w.field("sup_error", e.sup_error);
        w.field("tail_bound", e.tail_bound);
        w.field("grid_points", e.grid_points);
        w.end_object();
    }
    w.end_array();
    w.field("grid", report.grid_desc);
    w.field("notes", report.notes);
    w.end_object();
    return w.str() + "\n";
}

std::string certified_csv(const CertifiedPolynomial& cp) {
    std::string out = "degree,certified_bound,measured_error,t,h,pushes,terms\n";
    out += std::to_string(cp.degree()) + "," + format_double(cp.bound) + "," +
           format_double(cp.measured_error) + "," + format_double(cp.pipeline.t) + "," +
           format_double(cp.pipeline.h) + "," + std::to_string(cp.pipeline.pushes) + "," +
           std::to_string(cp.pipeline.terms) + "\n";
    return out;
}

std::string certified_json(const CertifiedPolynomial& cp) {
    JsonWriter w;
    w.begin_object();
    w.begin_array("coefficients");
    for (double c : cp.poly.real_coeffs()) w.element(c);
    w.end_array();
    w.begin_array("interval");
    w.element(cp.interval.lo);
    w.element(cp.interval.hi);
    w.end_array();
    w.field("certified_bound", cp.bound);
    w.field("measured_error", cp.measured_error);
    w.key_object("pipeline");
    w.field("t", cp.pipeline.t);
    w.field("h", cp.pipeline.h);
    w.field("degree", cp.degree());
    w.field("pushes", cp.pipeline.pushes);
    w.field("terms", cp.pipeline.terms);
    w.begin_array("stage_bounds");
    for (double b : cp.pipeline.stage_bounds) w.element(b);
    w.end_array();
    w.end_object();
    w.end_object();
    return w.str() + "\n";
}

std::string curve_text(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("curve columns differ in length");
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        out += format_double(xs[i]) + " " + format_double(ys[i]) + "\n";
    }
    return out;
}

}  // namespace mollify
