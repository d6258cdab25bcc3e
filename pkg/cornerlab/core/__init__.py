"""核心配置包"""
