#pragma once

#include <string>
#include <vector>

#include "speciso/bounds.hpp"
#include "speciso/certify.hpp"
#include "speciso/mm_decomp.hpp"
#include "speciso/spectral.hpp"

namespace speciso {

// Envelope metadata shared by every emitted document. Schema version 1.
// Timestamps can be suppressed so reruns are byte-identical; when enabled
// they are the one field allowed to differ between identical runs.
struct RunMeta {
    std::string command;
    std::string mesh_source;
    unsigned long seed = 0;
    bool timestamp = true;
};

std::string spectrum_json(const SpectrumResult& result, const RunMeta& meta);
std::string bound_report_json(const BoundReport& report, const RunMeta& meta);
std::string decomposition_json(const DecompositionResult& result,
                               const RunMeta& meta);
std::string certify_json(const CertifyResult& result, const RunMeta& meta);
std::string torus_table_json(const std::vector<TorusRow>& rows, int n,
                             double sphere_radius, double torus_volume,
                             const RunMeta& meta);

// RFC-4180: fields holding commas, quotes or newlines are quoted with
// embedded quotes doubled. Numeric fields use round-trip precision, empty
// optionals become empty fields.
std::string csv_quote(const std::string& field);
std::string bound_report_csv(const BoundReport& report);
std::string torus_table_csv(const std::vector<TorusRow>& rows);

// Overwrites; throws Error when the path cannot be opened or written.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace speciso
