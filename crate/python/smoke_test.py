import spid_lab as sl

u = sl.Subspace(2, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])
w = sl.Subspace(2, 4, [[0, 1, 0, 0], [0, 0, 1, 0]])
assert u.intersect(w).dim == 1
assert u.sum(w).dim == 3
assert u.sum(w).contains(u)
assert sl.gaussian_binomial(4, 2, 2) == 35
assert len(sl.enumerate_subspaces(4, 2, 2)) == 35

fam = sl.construct({"class": "II", "q": 2, "k": 3, "t": 2, "n": 4})
assert len(fam) == 4 and fam.ambient_dim == 7
assert fam.dim_span() == sl.extremal_dim(3, 2, 4) == 7
assert fam.attained() == [1, 2]
assert fam.is_spid([1, 2]) and not fam.is_spid([1])
delta, order = fam.shuffled(5).sort_nonincreasing()
assert delta == [3, 2, 1, 1], delta
assert fam.classify()["verdict"] == "ClassII"

again = sl.Family.from_json(fam.to_json())
assert [m.basis for m in again.members] == [m.basis for m in fam.members]

ex = sl.construct({"class": "remark", "q": 2, "k": 6, "t1": 4, "t2": 2, "n": 6, "m": 3, "s": 5})
rep = ex.bound_report()
assert rep["refined_threshold"] == sl.refined_bound(6, 4, 2, 6) == 21
assert rep["dim_span"] <= 21

try:
    sl.construct({"class": "III", "q": 2, "k": 4, "t": 2, "n": 6, "s": 4, "class_sizes": [1, 1, 1, 1]})
except ValueError as e:
    assert "q+1 >= s" in str(e)
else:
    raise AssertionError("expected a constraint error")

print("smoke test ok")
