"""
Bitmap rows and row subtraction
===============================

One row per vertex, one bit per RRR set, columns padded to 32. Picking
a seed clears its columns from every row with ``v & (v ^ u)``.
"""
from imcompress.bitmap import BitmapBlock, popcounts, row_bits, snapshot_row, subtract_rows

rows = ["110011", "011001", "101010", "010101", "001110"]
bm = BitmapBlock.from_rows(rows)
print("padded columns:", bm.padded_cols, "bytes:", bm.nbytes)
print("popcounts:", popcounts(bm).tolist())

u = int(popcounts(bm).argmax())
snap = snapshot_row(bm, u)  # copy first: row u itself is cleared too
subtract_rows(bm, snap[0])
for v in range(5):
    print(f"v{v + 1}: {rows[v]} -> {row_bits(bm, v)}")
print("popcounts after:", popcounts(bm).tolist())
