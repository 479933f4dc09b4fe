"""量子化条件测试包"""
