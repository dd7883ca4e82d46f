#include "specreg/csvio.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace specreg::io {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

CsvBuilder::CsvBuilder(const std::vector<std::string>& header) : columns_(header.size()) {
    bool first = true;
    for (const auto& h : header) {
        if (!first) buf_ += ',';
        buf_ += h;
        first = false;
    }
    buf_ += '\n';
}

void CsvBuilder::begin_row() {
    if (row_open_) throw std::logic_error("CsvBuilder: row already open");
    row_open_ = true;
    first_field_ = true;
    fields_in_row_ = 0;
}

void CsvBuilder::add(double v) { add(format_double(v)); }

void CsvBuilder::add(long long v) { add(std::to_string(v)); }

void CsvBuilder::add(const std::string& v) {
    if (!row_open_) throw std::logic_error("CsvBuilder: no open row");
    if (!first_field_) buf_ += ',';
    buf_ += v;
    first_field_ = false;
    ++fields_in_row_;
}

void CsvBuilder::end_row() {
    if (!row_open_) throw std::logic_error("CsvBuilder: no open row");
    if (fields_in_row_ != columns_)
        throw std::logic_error("CsvBuilder: row has " + std::to_string(fields_in_row_) +
                               " fields, header has " + std::to_string(columns_));
    buf_ += '\n';
    row_open_ = false;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view data) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return std::string(buf);
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_file: cannot open " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write_file: short write to " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_file: cannot open " + path);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

} // namespace specreg::io
