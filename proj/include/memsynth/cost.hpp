#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "memsynth/imply.hpp"
#include "memsynth/magic.hpp"
#include "memsynth/netlist.hpp"
#include "memsynth/simulator.hpp"

namespace memsynth {

enum class DesignStyle { Magic, Imply, Hybrid, Cmos };

std::string_view to_string(DesignStyle style) noexcept;
/// Case-insensitive: magic, imply, hybrid, cmos.
std::optional<DesignStyle> parse_design_style(std::string_view text) noexcept;

/// Published 45 nm synthesis figures, kept verbatim as strings. These are
/// reference data for side-by-side display only; nothing here is recomputed.
struct PublishedFigures {
  std::string_view circuit;
  std::string_view area;        // printed unit is "um"
  std::string_view power;
  std::string_view power_unit;  // "nW" or "uW"
  std::string_view delay_ns;    // empty when not published

  friend bool operator==(const PublishedFigures&, const PublishedFigures&) = default;
};

namespace published {
inline constexpr PublishedFigures kNor2{"2-input NOR (memristor)", "0.05", "46.87", "nW", ""};
inline constexpr PublishedFigures kNor16{"16-input NOR (memristor)", "0.28", "46.87", "nW", ""};
inline constexpr PublishedFigures kNor2DrivingNor16{"2-input NOR driving 16-input NOR (memristor)", "0.33", "46.87",
                                                    "nW", ""};
inline constexpr PublishedFigures kFullAdder{"full adder (memristor)", "0.45", "93.75", "nW", ""};
inline constexpr PublishedFigures kAdder32Cmos{"32-bit adder (CMOS)", "424.003991", "100.5579", "uW", "0.58"};
inline constexpr PublishedFigures kAdder32Memristor{"32-bit adder (memristor)", "289.407990", "123.8836", "uW",
                                                    "3.63"};
}  // namespace published

struct TechnologyParams {
  /// Transistors per (kind, fan-in). Gates without an entry cannot be costed as CMOS.
  std::map<std::pair<GateKind, std::size_t>, std::size_t> cmos_transistors = {
      {{GateKind::Nor, 2}, 4}, {{GateKind::Nand, 2}, 4}, {{GateKind::Not, 1}, 2},
      {{GateKind::And, 2}, 6}, {{GateKind::Or, 2}, 6},
  };
  double switching_power_per_gate_nw = 46.87;
  std::size_t hybrid_memristors_per_nand = 2;
  std::size_t hybrid_transistors_per_nand = 2;
  /// Search bounds used to map each gate onto an IMPLY program. Inputs stay
  /// intact so the gate can feed several readers.
  SynthesisOptions imply_gate = {2, 16, false, true};

  /// Throws ConfigurationError on non-positive constants.
  void validate() const;
};

struct CostReport {
  DesignStyle style = DesignStyle::Magic;
  std::size_t memristors = 0;
  std::size_t transistors = 0;
  std::size_t device_count = 0;  // memristors + transistors
  std::size_t gate_count = 0;
  std::optional<double> estimated_delay_ns;
  /// Upper bound: every gate switches once per evaluation.
  std::optional<double> estimated_switching_power_nw;
  std::optional<PublishedFigures> reference;
};

/// Sum over gates of fan-in + 1 (separate input memristors plus one output).
std::size_t count_magic_memristors(const Netlist& netlist);

/// Throws ConfigurationError for a (kind, fan-in) missing from params.
std::size_t count_cmos_transistors(const Netlist& netlist, const TechnologyParams& params = {});

struct HybridCount {
  std::size_t memristors = 0;
  std::size_t transistors = 0;
  friend bool operator==(const HybridCount&, const HybridCount&) = default;
};
/// Memristor AND pair plus CMOS inverter per NAND. Throws ConfigurationError
/// unless every gate is a 2-input NAND.
HybridCount count_hybrid_devices(const Netlist& netlist, const TechnologyParams& params = {});

/// Published figures for the reference circuits (single 2- and 16-input NOR,
/// NOR2 driving NOR16, the 9-NOR full adder, the 32-bit ripple adder), if
/// `netlist` is one of them.
std::optional<PublishedFigures> match_published(const Netlist& netlist, DesignStyle style);

/// MAGIC: fan-in + 1 memristors per gate, delay from critical_path_delay.
/// IMPLY: each gate mapped to its shortest IMP/FALSE program; delay is the
///        longest path weighted by program length times the switch delay.
/// HYBRID: NAND2-only netlists; one switch delay per logic level.
/// CMOS: transistor count only; delay and power are left to the published data.
CostReport build_report(const Netlist& netlist, DesignStyle style, const TechnologyParams& params = {},
                        const SimConfig& config = {});

/// Aligned plain-text table followed by any attached published figures.
std::string render_report_table(std::span<const CostReport> reports);
/// Header: style,devices,gates,delay_ns,power_nW,ref_area_um2,ref_power_uW,ref_delay_ns
std::string render_report_csv(std::span<const CostReport> reports);

}  // namespace memsynth
