#!/usr/bin/env python3
"""Build data/shiller_monthly.csv from public sources.

The engine expects a monthly series `date,index,short_rate` where `index` is
a total-return equity index (rebased to 1.0 at the first row) and
`short_rate` is an annualized one-year deposit rate as a decimal fraction.

Sources
-------
* S&P composite price and dividend, monthly from 1871: Robert Shiller's
  spreadsheet  http://www.econ.yale.edu/~shiller/data/ie_data.xls
* One-year interest rate, annual from 1871: the long-sample rate series in
  Shiller's "Irrational Exuberance" data (chapt26.xlsx, column R). Each
  annual value is applied to the twelve months of its year.
* One-year constant-maturity Treasury yield, monthly from 1953 (takes over
  from the annual series): https://fred.stlouisfed.org/graph/fredgraph.csv?id=GS1

The total-return index reinvests the dividend stream monthly:
    TR[t] = TR[t-1] * (P[t] + D[t] / 12) / P[t-1]
with D the annualized dividend rate column, and is rebased to 1.0 at the
first month so that calibrated drift scales are comparable across runs.

Requires: requests, pandas, xlrd (for .xls), openpyxl (for .xlsx).

Usage:
    python3 tools/fetch_shiller.py [--end 2017-03] [--out data/shiller_monthly.csv]
"""

import argparse
import io
import sys

try:
    import pandas as pd
    import requests
except ImportError as exc:  # pragma: no cover
    sys.exit(f"missing dependency: {exc.name}; pip install requests pandas xlrd openpyxl")

IE_DATA_URL = "http://www.econ.yale.edu/~shiller/data/ie_data.xls"
CHAPT26_URL = "http://www.econ.yale.edu/~shiller/data/chapt26.xlsx"
GS1_URL = "https://fred.stlouisfed.org/graph/fredgraph.csv?id=GS1"


def month_from_fraction(value: float) -> tuple[int, int]:
    """Shiller dates are YYYY.MM with the decimal meaning the month (1871.1
    is October 1871, 1871.01 is January); rounding resolves float noise."""
    year = int(value)
    month = round((value - year) * 100)
    if not 1 <= month <= 12:
        raise ValueError(f"cannot parse Shiller date {value!r}")
    return year, month


def fetch(url: str) -> bytes:
    print(f"fetching {url}")
    response = requests.get(url, timeout=120, headers={"User-Agent": "rwval-data-fetch"})
    response.raise_for_status()
    return response.content


def load_price_dividend() -> "pd.DataFrame":
    raw = fetch(IE_DATA_URL)
    sheet = pd.read_excel(io.BytesIO(raw), sheet_name="Data", skiprows=7)
    sheet = sheet.rename(columns=lambda c: str(c).strip())
    date_col, p_col, d_col = sheet.columns[0], "P", "D"
    rows = []
    for _, row in sheet.iterrows():
        try:
            year, month = month_from_fraction(float(row[date_col]))
            price = float(row[p_col])
            dividend = float(row[d_col])
        except (TypeError, ValueError):
            continue
        if price > 0 and pd.notna(dividend):
            rows.append({"year": year, "month": month, "price": price, "dividend": dividend})
    frame = pd.DataFrame(rows)
    if frame.empty:
        sys.exit("no usable rows in ie_data.xls; the sheet layout may have changed")
    return frame


def load_annual_rates() -> dict[int, float]:
    raw = fetch(CHAPT26_URL)
    sheet = pd.read_excel(io.BytesIO(raw), skiprows=7)
    sheet = sheet.rename(columns=lambda c: str(c).strip())
    rates: dict[int, float] = {}
    year_col = sheet.columns[0]
    rate_col = next((c for c in sheet.columns if str(c).strip().upper() == "R"), None)
    if rate_col is None:
        rate_col = next((c for c in sheet.columns if "rate" in str(c).lower()), None)
    if rate_col is None:
        sys.exit("no one-year rate column found in chapt26.xlsx")
    for _, row in sheet.iterrows():
        try:
            year = int(row[year_col])
            rate = float(row[rate_col])
        except (TypeError, ValueError):
            continue
        if 1800 < year < 2100 and 0 < rate < 50:
            rates[year] = rate / 100.0
    if not rates:
        sys.exit("no usable annual rates in chapt26.xlsx")
    return rates


def load_gs1() -> dict[tuple[int, int], float]:
    raw = fetch(GS1_URL).decode()
    out: dict[tuple[int, int], float] = {}
    for line in raw.splitlines()[1:]:
        date, _, value = line.partition(",")
        if not value or value == ".":
            continue
        year, month = int(date[0:4]), int(date[5:7])
        out[(year, month)] = float(value) / 100.0
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--start", default="1871-01")
    parser.add_argument("--end", default="2017-03")
    parser.add_argument("--out", default="data/shiller_monthly.csv")
    args = parser.parse_args()

    start = tuple(int(x) for x in args.start.split("-"))
    end = tuple(int(x) for x in args.end.split("-"))

    prices = load_price_dividend()
    annual = load_annual_rates()
    gs1 = load_gs1()

    prices = prices.sort_values(["year", "month"]).reset_index(drop=True)
    mask = prices.apply(lambda r: start <= (r.year, r.month) <= end, axis=1)
    prices = prices[mask].reset_index(drop=True)

    total_return = [1.0]
    for i in range(1, len(prices)):
        prev, cur = prices.iloc[i - 1], prices.iloc[i]
        growth = (cur.price + cur.dividend / 12.0) / prev.price
        total_return.append(total_return[-1] * growth)

    lines = ["date,index,short_rate"]
    for i, row in prices.iterrows():
        key = (int(row.year), int(row.month))
        rate = gs1.get(key, annual.get(int(row.year)))
        if rate is None:
            sys.exit(f"no one-year rate for {key[0]}-{key[1]:02d}; "
                     "pass a shorter --end or patch the rate sources")
        lines.append(f"{key[0]:04d}-{key[1]:02d},{total_return[i]:.10g},{rate:.6g}")

    with open(args.out, "w") as handle:
        handle.write("\n".join(lines) + "\n")
    print(f"wrote {args.out} ({len(lines) - 1} months, "
          f"{lines[1].split(',')[0]} .. {lines[-1].split(',')[0]})")


if __name__ == "__main__":
    main()
