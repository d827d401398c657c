#pragma once

#include <netspread/fixtures.hpp>
#include <netspread/graph.hpp>
#include <netspread/json_io.hpp>
#include <netspread/rank.hpp>
#include <netspread/report.hpp>
#include <netspread/spread.hpp>
#include <netspread/states.hpp>
