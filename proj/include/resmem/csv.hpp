#pragma once

#include <string>
#include <vector>

#include "resmem/memory.hpp"
#include "resmem/noise.hpp"
#include "resmem/rates.hpp"
#include "resmem/tomo.hpp"
#include "resmem/wigner.hpp"

namespace resmem {

// 17 significant digits with a '.' decimal point regardless of locale.
std::string format_number(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string render() const;
};

// LF line endings. Throws IoError.
void write_text(const std::string &path, const std::string &content);
void write_csv(const std::string &path, const CsvTable &table);
CsvTable read_csv(const std::string &path);

CsvTable mode_table(const TemporalMode &mode, const std::string &value_name = "g");
CsvTable schedule_table(const CouplingSchedule &sched);
CsvTable coherence_table(const CoherenceSeries &series, const std::string &value_name);
CsvTable scaling_table(const std::vector<ScalingRow> &rows);

// Header "p/x", xs...; then one row per p with p first.
CsvTable wigner_table(const WignerGrid &grid);
WignerGrid wigner_from_table(const CsvTable &table);

// Columns theta_deg, x.
CsvTable dataset_table(const HomodyneDataset &data);
HomodyneDataset dataset_from_table(const CsvTable &table);

// Header of sample times, then one frame per row.
CsvTable traces_table(const TraceMatrix &traces);
TraceMatrix traces_from_table(const CsvTable &table);

}  // namespace resmem
