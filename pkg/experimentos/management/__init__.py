# Management commands for experimentos app
