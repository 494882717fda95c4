from comvar.exactalg import FieldMatrix


def random_matrix(rng, rows, cols, p, upper=False, strict=False):
    def entry(i, j):
        if strict and j <= i or upper and j < i:
            return 0
        return rng.randrange(p)

    return FieldMatrix(rows, cols, (entry(i, j) for i in range(rows) for j in range(cols)), p)
