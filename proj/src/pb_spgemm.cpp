#include "spgemm/pb_spgemm.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>

namespace spgemm {

std::uint32_t choose_nbins(std::uint64_t flop, index_t nrows, const PbConfig& cfg,
                           std::uint32_t tuple_bytes) {
    const std::uint64_t budget = std::max<std::uint64_t>(1, cfg.l2_bytes / 2);
    const std::uint64_t raw = (flop * tuple_bytes + budget - 1) / budget;
    std::uint64_t n = std::bit_ceil(std::max<std::uint64_t>(raw, 1));
    n = std::clamp<std::uint64_t>(n, 64, 8192);
    while (n > nrows) n >>= 1;
    return static_cast<std::uint32_t>(std::max<std::uint64_t>(n, 1));
}

namespace {

int thread_count(const PbConfig& cfg) {
    return cfg.nthreads > 0 ? cfg.nthreads : omp_get_max_threads();
}

std::vector<index_t> uniform_starts(index_t nrows, std::uint32_t nbins, index_t rows_per_bin) {
    std::vector<index_t> starts(nbins + 1);
    for (std::uint32_t b = 0; b <= nbins; ++b)
        starts[b] = static_cast<index_t>(
            std::min<std::uint64_t>(static_cast<std::uint64_t>(b) * rows_per_bin, nrows));
    return starts;
}

// per-bin flop from one O(nnz(A)) pass: each A entry in column i lands
// nnz(B(i,:)) tuples in its row's bin.
template <typename BinOf>
std::vector<std::uint64_t> bin_flop(const CscMatrix& a, const CsrMatrix& b, std::uint32_t nbins,
                                    BinOf bin_of, int nthreads) {
    std::vector<std::uint64_t> per_bin(nbins, 0);
#pragma omp parallel num_threads(nthreads)
    {
        std::vector<std::uint64_t> local(nbins, 0);
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(a.dims.ncols); ++i) {
            const std::uint64_t bn = b.row_nnz(static_cast<index_t>(i));
            if (bn == 0) continue;
            for (offset_t p = a.colptr[i]; p < a.colptr[i + 1]; ++p)
                local[bin_of(a.rowids[p])] += bn;
        }
#pragma omp critical
        for (std::uint32_t bb = 0; bb < nbins; ++bb) per_bin[bb] += local[bb];
    }
    return per_bin;
}

// Flop-balanced variable row ranges: cut the per-row flop prefix into nbins
// nearly equal chunks.
std::vector<index_t> balanced_starts(const CscMatrix& a, const CsrMatrix& b, std::uint32_t nbins,
                                     std::uint64_t flop, int nthreads) {
    const index_t nrows = a.dims.nrows;
    std::vector<std::uint64_t> row_flop(nrows, 0);
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(a.dims.ncols); ++i) {
        const std::uint64_t bn = b.row_nnz(static_cast<index_t>(i));
        if (bn == 0) continue;
        for (offset_t p = a.colptr[i]; p < a.colptr[i + 1]; ++p) {
#pragma omp atomic
            row_flop[a.rowids[p]] += bn;
        }
    }

    std::vector<index_t> starts(nbins + 1, nrows);
    starts[0] = 0;
    const double target = static_cast<double>(flop) / nbins;
    std::uint64_t acc = 0;
    std::uint32_t bin = 1;
    for (index_t r = 0; r < nrows && bin < nbins; ++r) {
        acc += row_flop[r];
        if (static_cast<double>(acc) >= target * bin) starts[bin++] = r + 1;
    }
    return starts;
}

}  // namespace

SymbolicResult symbolic(const CscMatrix& a, const CsrMatrix& b, const PbConfig& cfg) {
    require_multipliable(a.dims, b.dims);
    if (cfg.nbins != 0 && !std::has_single_bit(cfg.nbins))
        throw parameter_error("nbins must be a power of two");

    const index_t k = a.dims.ncols;
    const index_t nrows = a.dims.nrows;
    const int nthreads = thread_count(cfg);

    SymbolicResult sym;
    sym.per_column_flop.resize(k);

#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(k); ++i)
        sym.per_column_flop[i] = static_cast<std::uint64_t>(a.col_nnz(static_cast<index_t>(i))) *
                                 b.row_nnz(static_cast<index_t>(i));

    for (std::uint64_t pc : sym.per_column_flop)
        if (__builtin_add_overflow(sym.flop, pc, &sym.flop))
            throw parameter_error("flop count overflows 64 bits");

    // Auto-sized bins assume 4-byte keys; if the key then widens to 8 bytes,
    // resize once for the fatter records.
    std::uint32_t nbins = cfg.nbins ? cfg.nbins : choose_nbins(sym.flop, nrows, cfg, 12);
    index_t rows_per_bin = (nrows + nbins - 1) / nbins;
    if (cfg.nbins == 0 && choose_key_width(rows_per_bin, b.dims.ncols) == 64) {
        nbins = choose_nbins(sym.flop, nrows, cfg, 16);
        rows_per_bin = (nrows + nbins - 1) / nbins;
    }

    sym.nbins = nbins;
    sym.uniform_rows_per_bin = rows_per_bin;
    sym.bin_row_starts = uniform_starts(nrows, nbins, rows_per_bin);
    sym.per_bin_flop = bin_flop(
        a, b, nbins, [&](index_t row) { return row / rows_per_bin; }, nthreads);

    if (cfg.balanced_bins) {
        const std::uint32_t tuple_bytes =
            choose_key_width(rows_per_bin, b.dims.ncols) == 32 ? 12 : 16;
        const std::uint64_t max_bin =
            *std::max_element(sym.per_bin_flop.begin(), sym.per_bin_flop.end());
        if (max_bin * tuple_bytes > cfg.l2_bytes) {
            sym.bin_row_starts = balanced_starts(a, b, nbins, sym.flop, nthreads);
            sym.uniform_rows_per_bin = 0;
            std::vector<index_t> row_bin(nrows);
            for (std::uint32_t bb = 0; bb < nbins; ++bb)
                for (index_t r = sym.bin_row_starts[bb]; r < sym.bin_row_starts[bb + 1]; ++r)
                    row_bin[r] = bb;
            sym.per_bin_flop = bin_flop(
                a, b, nbins, [&](index_t row) { return row_bin[row]; }, nthreads);
        }
    }
    return sym;
}

BinSet make_bins(const SymbolicResult& sym, MatrixDims c_dims) {
    BinSet bins;
    bins.c_dims = c_dims;
    bins.nbins = sym.nbins;
    bins.rows_per_bin = sym.uniform_rows_per_bin;
    bins.row_starts = sym.bin_row_starts;

    index_t max_span = 0;
    for (std::uint32_t b = 0; b < bins.nbins; ++b)
        max_span = std::max(max_span, bins.row_starts[b + 1] - bins.row_starts[b]);
    bins.col_bits = ceil_log2(c_dims.ncols);
    bins.row_bits = ceil_log2(max_span);
    bins.key_width = bins.row_bits + bins.col_bits <= 32 ? 32 : 64;

    if (bins.rows_per_bin == 0) {
        bins.row_bin.resize(c_dims.nrows);
        for (std::uint32_t b = 0; b < bins.nbins; ++b)
            for (index_t r = bins.row_starts[b]; r < bins.row_starts[b + 1]; ++r)
                bins.row_bin[r] = b;
    }

    bins.offsets.resize(bins.nbins + 1);
    bins.offsets[0] = 0;
    for (std::uint32_t b = 0; b < bins.nbins; ++b)
        bins.offsets[b + 1] = bins.offsets[b] + sym.per_bin_flop[b];
    bins.fill.assign(bins.nbins, 0);
    bins.merged.assign(bins.nbins, 0);

    const offset_t total = bins.offsets[bins.nbins];
    if (bins.key_width == 32)
        bins.keys32.resize(total);
    else
        bins.keys64.resize(total);
    bins.values.resize(total);
    return bins;
}

namespace {

template <typename KeyT>
void expand_impl(const CscMatrix& a, const CsrMatrix& b, BinSet& bins, std::vector<KeyT>& keys,
                 const PbConfig& cfg) {
    const std::uint32_t nbins = bins.nbins;
    const std::uint32_t record_bytes = (bins.key_width == 32 ? 4 : 8) + 8;
    const std::uint32_t lbin_cap = std::max<std::uint32_t>(1, cfg.lbin_bytes / record_bytes);
    const int col_bits = bins.col_bits;
    const int nthreads = thread_count(cfg);
    std::atomic<bool> overflow{false};

#pragma omp parallel num_threads(nthreads)
    {
        std::vector<KeyT> lkeys(static_cast<std::size_t>(nbins) * lbin_cap);
        std::vector<value_t> lvals(static_cast<std::size_t>(nbins) * lbin_cap);
        std::vector<std::uint32_t> lfill(nbins, 0);

        auto flush = [&](std::uint32_t bin) {
            const std::uint32_t cnt = lfill[bin];
            offset_t pos;
#pragma omp atomic capture
            {
                pos = bins.fill[bin];
                bins.fill[bin] += cnt;
            }
            if (pos + cnt > bins.capacity(bin)) {
                overflow.store(true, std::memory_order_relaxed);
            } else {
                const offset_t at = bins.offsets[bin] + pos;
                std::memcpy(keys.data() + at, lkeys.data() + std::size_t{bin} * lbin_cap,
                            cnt * sizeof(KeyT));
                std::memcpy(bins.values.data() + at, lvals.data() + std::size_t{bin} * lbin_cap,
                            cnt * sizeof(value_t));
            }
            lfill[bin] = 0;
        };

#pragma omp for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(a.dims.ncols); ++i) {
            const offset_t b_lo = b.rowptr[i], b_hi = b.rowptr[i + 1];
            if (b_lo == b_hi) continue;
            for (offset_t p = a.colptr[i]; p < a.colptr[i + 1]; ++p) {
                const index_t rowid = a.rowids[p];
                const value_t aval = a.values[p];
                const std::uint32_t bin = bins.bin_of(rowid);
                const KeyT row_part = static_cast<KeyT>(rowid - bins.row_starts[bin])
                                      << col_bits;
                for (offset_t q = b_lo; q < b_hi; ++q) {
                    if (lfill[bin] == lbin_cap) flush(bin);
                    const std::size_t slot = std::size_t{bin} * lbin_cap + lfill[bin];
                    lkeys[slot] = row_part | static_cast<KeyT>(b.colids[q]);
                    lvals[slot] = aval * b.values[q];
                    ++lfill[bin];
                }
            }
        }

        // Drain pass: residual partially-filled local bins.
        for (std::uint32_t bin = 0; bin < nbins; ++bin)
            if (lfill[bin] != 0) flush(bin);
    }

    if (overflow.load())
        throw internal_error("expand overflowed a bin; symbolic sizing disagrees");
    if (bins.total_filled() != bins.offsets[nbins])
        throw internal_error("expand produced " + std::to_string(bins.total_filled()) +
                             " tuples, symbolic sized " + std::to_string(bins.offsets[nbins]));
}

}  // namespace

void expand(const CscMatrix& a, const CsrMatrix& b, BinSet& bins, const PbConfig& cfg) {
    require_multipliable(a.dims, b.dims);
    if (cfg.lbin_bytes == 0 || cfg.lbin_bytes % kCooNonzeroBytes != 0)
        throw parameter_error("lbin_bytes must be a positive multiple of 16");
    if (bins.key_width == 32)
        expand_impl<std::uint32_t>(a, b, bins, bins.keys32, cfg);
    else
        expand_impl<std::uint64_t>(a, b, bins, bins.keys64, cfg);
}

void sort_bins(BinSet& bins, const PbConfig& cfg) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(cfg))
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(bins.nbins); ++b) {
        const offset_t off = bins.offsets[b];
        const std::size_t n = bins.fill[b];
        if (bins.key_width == 32)
            sort_bin_records(bins.keys32.data() + off, bins.values.data() + off, n);
        else
            sort_bin_records(bins.keys64.data() + off, bins.values.data() + off, n);
    }
}

void compress_bins(BinSet& bins, const PbConfig& cfg) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(cfg))
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(bins.nbins); ++b) {
        const offset_t off = bins.offsets[b];
        const std::size_t n = bins.fill[b];
        if (bins.key_width == 32)
            bins.merged[b] = compress_bin_records(bins.keys32.data() + off,
                                                  bins.values.data() + off, n);
        else
            bins.merged[b] = compress_bin_records(bins.keys64.data() + off,
                                                  bins.values.data() + off, n);
    }
}

namespace {

template <typename KeyT>
CsrMatrix convert_impl(const BinSet& bins, const std::vector<KeyT>& keys) {
    CsrMatrix out;
    out.dims = bins.c_dims;
    out.rowptr.assign(static_cast<std::size_t>(bins.c_dims.nrows) + 1, 0);

    const int col_bits = bins.col_bits;
    const KeyT col_mask = (KeyT{1} << col_bits) - 1;

    // Bins own disjoint row ranges, so per-row counting is race-free.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(bins.nbins); ++b) {
        const index_t base = bins.row_starts[b];
        for (offset_t p = bins.offsets[b]; p < bins.offsets[b] + bins.merged[b]; ++p)
            ++out.rowptr[base + static_cast<index_t>(keys[p] >> col_bits) + 1];
    }
    for (index_t r = 0; r < bins.c_dims.nrows; ++r) out.rowptr[r + 1] += out.rowptr[r];

    const offset_t nnz = out.rowptr[bins.c_dims.nrows];
    out.colids.resize(nnz);
    out.values.resize(nnz);

    // Bin b's merged records are already row-major; they land contiguously
    // starting at the first row the bin owns.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(bins.nbins); ++b) {
        offset_t at = out.rowptr[bins.row_starts[b]];
        for (offset_t p = bins.offsets[b]; p < bins.offsets[b] + bins.merged[b]; ++p, ++at) {
            out.colids[at] = static_cast<index_t>(keys[p] & col_mask);
            out.values[at] = bins.values[p];
        }
    }
    return out;
}

}  // namespace

CsrMatrix convert_csr(const BinSet& bins) {
    return bins.key_width == 32 ? convert_impl(bins, bins.keys32)
                                : convert_impl(bins, bins.keys64);
}

PbResult pb_multiply(const CscMatrix& a, const CsrMatrix& b, const PbConfig& cfg) {
    require_multipliable(a.dims, b.dims);

    PbResult res;
    WallTimer total;
    WallTimer phase;

    res.sym = symbolic(a, b, cfg);
    BinSet bins = make_bins(res.sym, {a.dims.nrows, b.dims.ncols});
    res.phases.t_symbolic = phase.lap();

    expand(a, b, bins, cfg);
    if (bins.total_filled() != res.sym.flop)
        throw internal_error("tuple conservation broken: expanded " +
                             std::to_string(bins.total_filled()) + " of " +
                             std::to_string(res.sym.flop));
    res.phases.t_expand = phase.lap();

    sort_bins(bins, cfg);
    res.phases.t_sort = phase.lap();

    compress_bins(bins, cfg);
    res.phases.t_compress = phase.lap();

    res.c = convert_csr(bins);
    res.phases.t_convert = phase.lap();
    res.phases.t_total = total.seconds();

    if (res.c.nnz() != bins.total_merged())
        throw internal_error("compressed counts disagree with output nnz");
    return res;
}

}  // namespace spgemm
