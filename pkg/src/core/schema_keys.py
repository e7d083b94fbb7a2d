class Keys:
    """Константы ключей JSON-отчётов и колонок TSV."""

    # Параметры популяции
    GAMMA1 = "gamma1"
    GAMMA2 = "gamma2"
    GAMMA3 = "gamma3"
    LAMBDA1 = "lambda1"
    LAMBDA2 = "lambda2"
    RHO = "rho"
    CONVENTION = "convention"

    # Строки таблицы PRE
    ESTIMATOR = "estimator"
    BIAS = "bias"
    MSE = "mse"
    PRE = "pre"
    PRINTED_PRE = "printed_pre"
    NOTE = "note"

    # Члены семейства
    MEMBER = "member"
    W1 = "w1"
    W2 = "w2"
    ALPHA = "alpha"
    ETA = "eta"
    THETA = "theta"

    # Отчёт Монте-Карло
    EMP_BIAS = "emp_bias"
    EMP_MSE = "emp_mse"
    SE_BIAS = "se_bias"
    SE_MSE = "se_mse"
    THEORY_BIAS = "theory_bias"
    THEORY_MSE = "theory_mse"
    Z_BIAS = "z_bias"
    Z_MSE = "z_mse"
    FAILED = "failed_replicates"
    REPLICATES = "replicates"

    # Подгонка
    SE_GAMMA1 = "se_gamma1"
    SE_GAMMA2 = "se_gamma2"
    SE_GAMMA3 = "se_gamma3"
    N = "n"
    CLAMPED = "clamped"

    # Критерий согласия
    MARGINAL = "marginal"
    LAMBDA_HAT = "lambda_hat"
    CHI2 = "chi2"
    DF = "df"
    PVALUE = "pvalue"
    CELL = "cell"
    OBSERVED = "observed"
    EXPECTED = "expected"

    # Колонки TSV по командам (фиксированный порядок)
    PRE_TABLE_COLUMNS = (ESTIMATOR, BIAS, MSE, PRE, PRINTED_PRE, NOTE)
    MC_COLUMNS = (
        ESTIMATOR, REPLICATES, FAILED, EMP_BIAS, SE_BIAS, EMP_MSE, SE_MSE,
        THEORY_BIAS, THEORY_MSE, Z_BIAS, Z_MSE,
    )
    FIT_COLUMNS = (
        GAMMA1, GAMMA2, GAMMA3, SE_GAMMA1, SE_GAMMA2, SE_GAMMA3, LAMBDA1, LAMBDA2, RHO, N, CLAMPED,
    )
    GOF_COLUMNS = (MARGINAL, CELL, OBSERVED, EXPECTED)
    GOF_SUMMARY_COLUMNS = (MARGINAL, N, LAMBDA_HAT, CHI2, DF, PVALUE)
    EFFICIENCY_COLUMNS = ("condition", "lhs", "rhs", "holds", "label", "mse_difference", "mse_difference_holds")
    VERDICT_COLUMNS = ("source", "predicted", "z", "supported")
    OPTIMUM_COLUMNS = (
        "family", "empirical", "empirical_mse", "theory_as_printed", "theory_corrected", "grid_size",
    )
    WEIGHTS_COLUMNS = (
        MEMBER, "empirical_w1", "empirical_w2", "empirical_mse", "theory_w1", "theory_w2",
        "theory_mse_empirical", "grid_size",
    )
    MEMBER_COLUMNS = (MEMBER, "group", W1, W2, ALPHA, ETA, THETA)
