#pragma once

#include <string>
#include <vector>

#include "ticketclass/evaluation.hpp"

namespace ticketclass {

// Resolved setting configuration as JSON, embedded in every report so runs
// are reproducible from their outputs alone.
std::string setting_config_to_json(const SettingConfig& setting);

std::string setting_report_to_tsv(const SettingReport& report);
std::string setting_report_to_json(const SettingReport& report);

std::string ablation_to_tsv(const std::vector<SettingReport>& reports);
std::string ablation_to_json(const std::vector<SettingReport>& reports);

}  // namespace ticketclass
