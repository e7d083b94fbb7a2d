APP_ID = "poisson_estimators"
APP_VERSION = "0.1.0"
