// Copyright 2026 The qdimred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdimred/ansatz.hpp"

#include <string>

#include "qdimred/error.hpp"

namespace qdr {
namespace {

using K = GateKind;
constexpr std::array<int, 3> none{-1, -1, -1};
constexpr std::array<int, 3> slot(int s) { return {s, -1, -1}; }

// Controlled gates: w0 is the control.
const std::vector<TemplateGate> kTtn = {
    {K::RY, 0, 0, slot(0)}, {K::RY, 1, 1, slot(1)}, {K::CNOT, 0, 1, none}};

const std::vector<TemplateGate> kU9 = {
    {K::H, 0, 0, none},     {K::H, 1, 1, none},     {K::CZ, 0, 1, none},
    {K::RX, 0, 0, slot(0)}, {K::RX, 1, 1, slot(1)}};

const std::vector<TemplateGate> kU13 = {
    {K::RY, 0, 0, slot(0)},  {K::RY, 1, 1, slot(1)}, {K::CRZ, 1, 0, slot(2)},
    {K::RY, 0, 0, slot(3)},  {K::RY, 1, 1, slot(4)}, {K::CRZ, 0, 1, slot(5)}};

const std::vector<TemplateGate> kU14 = {
    {K::RY, 0, 0, slot(0)},  {K::RY, 1, 1, slot(1)}, {K::CRX, 1, 0, slot(2)},
    {K::RY, 0, 0, slot(3)},  {K::RY, 1, 1, slot(4)}, {K::CRX, 0, 1, slot(5)}};

const std::vector<TemplateGate> kSo4 = {
    {K::RY, 0, 0, slot(0)}, {K::RY, 1, 1, slot(1)}, {K::CNOT, 0, 1, none},
    {K::RY, 0, 0, slot(2)}, {K::RY, 1, 1, slot(3)}, {K::CNOT, 0, 1, none},
    {K::RY, 0, 0, slot(4)}, {K::RY, 1, 1, slot(5)}};

const std::vector<TemplateGate> kU5 = {
    {K::RX, 0, 0, slot(0)},  {K::RX, 1, 1, slot(1)},  {K::RZ, 0, 0, slot(2)},
    {K::RZ, 1, 1, slot(3)},  {K::CRZ, 1, 0, slot(4)}, {K::CRZ, 0, 1, slot(5)},
    {K::RX, 0, 0, slot(6)},  {K::RX, 1, 1, slot(7)},  {K::RZ, 0, 0, slot(8)},
    {K::RZ, 1, 1, slot(9)}};

const std::vector<TemplateGate> kU6 = {
    {K::RX, 0, 0, slot(0)},  {K::RX, 1, 1, slot(1)},  {K::RZ, 0, 0, slot(2)},
    {K::RZ, 1, 1, slot(3)},  {K::CRX, 1, 0, slot(4)}, {K::CRX, 0, 1, slot(5)},
    {K::RX, 0, 0, slot(6)},  {K::RX, 1, 1, slot(7)},  {K::RZ, 0, 0, slot(8)},
    {K::RZ, 1, 1, slot(9)}};

const std::vector<TemplateGate> kSu4 = {
    {K::U3, 0, 0, {0, 1, 2}},   {K::U3, 1, 1, {3, 4, 5}},    {K::CNOT, 0, 1, none},
    {K::RY, 0, 0, slot(6)},     {K::RZ, 1, 1, slot(7)},      {K::CNOT, 1, 0, none},
    {K::RY, 0, 0, slot(8)},     {K::CNOT, 0, 1, none},       {K::U3, 0, 0, {9, 10, 11}},
    {K::U3, 1, 1, {12, 13, 14}}};

// Control on the wire being pooled away, rotations on the survivor.
const std::vector<TemplateGate> kPooling = {
    {K::CRZ, 0, 1, slot(0)}, {K::CRX, 0, 1, slot(1)}};

}  // namespace

int ansatz_param_count(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::U_TTN: return 2;
    case AnsatzKind::U_9: return 2;
    case AnsatzKind::U_13: return 6;
    case AnsatzKind::U_14: return 6;
    case AnsatzKind::U_SO4: return 6;
    case AnsatzKind::U_5: return 10;
    case AnsatzKind::U_6: return 10;
    case AnsatzKind::U_SU4: return 15;
    case AnsatzKind::Pooling: return 2;
  }
  return 0;
}

std::string_view to_string(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::U_TTN: return "U_TTN";
    case AnsatzKind::U_9: return "U_9";
    case AnsatzKind::U_13: return "U_13";
    case AnsatzKind::U_14: return "U_14";
    case AnsatzKind::U_SO4: return "U_SO4";
    case AnsatzKind::U_5: return "U_5";
    case AnsatzKind::U_6: return "U_6";
    case AnsatzKind::U_SU4: return "U_SU4";
    case AnsatzKind::Pooling: return "Pooling";
  }
  return "?";
}

AnsatzKind parse_ansatz_kind(std::string_view name) {
  for (AnsatzKind k : kAllAnsatzKinds) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown ansatz '" + std::string(name) + "'");
}

const std::vector<TemplateGate>& block_template(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::U_TTN: return kTtn;
    case AnsatzKind::U_9: return kU9;
    case AnsatzKind::U_13: return kU13;
    case AnsatzKind::U_14: return kU14;
    case AnsatzKind::U_SO4: return kSo4;
    case AnsatzKind::U_5: return kU5;
    case AnsatzKind::U_6: return kU6;
    case AnsatzKind::U_SU4: return kSu4;
    case AnsatzKind::Pooling: return kPooling;
  }
  return kTtn;
}

std::vector<Gate> block_gates(AnsatzKind kind, std::span<const double> params, int a, int b) {
  if (static_cast<int>(params.size()) != ansatz_param_count(kind)) {
    throw GateError(std::string(to_string(kind)) + " expects " +
                    std::to_string(ansatz_param_count(kind)) + " parameters, got " +
                    std::to_string(params.size()));
  }
  const std::array<int, 2> wires{a, b};
  std::vector<Gate> gates;
  for (const TemplateGate& t : block_template(kind)) {
    std::vector<double> angles;
    for (int s : t.slots) {
      if (s >= 0) angles.push_back(params[static_cast<std::size_t>(s)]);
    }
    if (wire_arity(t.kind) == 1) {
      gates.push_back(Gate::make(t.kind, angles, std::array{wires[t.w0]}));
    } else {
      gates.push_back(Gate::make(t.kind, angles, std::array{wires[t.w0], wires[t.w1]}));
    }
  }
  return gates;
}

void apply_block(StateVector& state, AnsatzKind kind, std::span<const double> params,
                 int a, int b) {
  for (const Gate& g : block_gates(kind, params, a, b)) state.apply(g);
}

}  // namespace qdr
