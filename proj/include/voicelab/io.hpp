#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "voicelab/convolution.hpp"
#include "voicelab/coorbit.hpp"
#include "voicelab/grid.hpp"
#include "voicelab/signal.hpp"
#include "voicelab/voice.hpp"

namespace voicelab::io {

using ordered_json = nlohmann::ordered_json;

// CSV column layouts (floats carry 12 significant digits):
//   signals:        x,real,imag
//   line fields:    b,real,imag
//   affine fields:  b,a,real,imag
//   3-D fields:     b,a,phi,real,imag
//   profiles:       halfwidth,p,partial_norm
//   coorbit batch:  signal_id,p,coorbit_norm,residual,verdict

void write_signal_csv(const Signal1D& f, const std::filesystem::path& path);
Signal1D read_signal_csv(const std::filesystem::path& path);

/// Little-endian binary: 8-byte sample count, then interleaved re/im doubles
/// (axis stored as three doubles after the header).
void write_signal_binary(const Signal1D& f, const std::filesystem::path& path);
Signal1D read_signal_binary(const std::filesystem::path& path);

void write_field_csv(const VoiceField& f, const std::filesystem::path& path);

void write_profile_csv(const std::vector<WindowPoint>& profile, double p,
                       const std::filesystem::path& path);
void append_profile_csv(const std::vector<WindowPoint>& profile, double p, std::string& out);

ordered_json to_json(const ConvReport& report);
ordered_json to_json(const AdmissibilityReport& report);
ordered_json to_json(const CoorbitReport& report);

void write_json(const ordered_json& j, const std::filesystem::path& path);

/// Round to 12 significant digits so emitted JSON numbers match the CSV rule.
double rounded(double x);

}  // namespace voicelab::io
